#pragma once

#include <string>
#include <vector>

#include "parrep/accumulator.hpp"
#include "parrep/model.hpp"

namespace parrep {

/// Path-space Fisher information estimate: across-trajectory mean of the
/// window-averaged integrand sum_j lambda_j grad(log lambda_j) grad(log lambda_j)^T,
/// with per-entry 95% confidence half-widths.
struct FimEstimate {
    Matrix matrix;
    Matrix half_widths;
    int n_traj = 0;
    SamplingWindow window;
};

/// Integrated autocorrelation of one observable: (1/T) Var over trajectories
/// of the window integral Y = int_window f dt.
struct IafEstimate {
    std::string label;
    double value = 0.0;
    int n_traj = 0;
    double window_length = 0.0;
};

struct SensitivityBound {
    std::string observable;
    std::string parameter;
    double bound = 0.0;  // sqrt(IAF) * sqrt(v^T FIM v)
};

struct SensitivityBoundReport {
    std::vector<SensitivityBound> bounds;  // observable-major, direction-minor
    FimEstimate fim;
    std::vector<IafEstimate> iafs;
    double confidence_level = 0.95;
};

/// Window-averaged FIM sample of one trajectory.  EmptyWindow when no
/// simulated time fell inside the accumulator's window.
Matrix fim_sample(const TrajectoryAccumulator& acc);

/// Across-trajectory mean and 1.96 * SE half-widths of per-trajectory FIM
/// samples.
FimEstimate accumulate_fim(const std::vector<Matrix>& samples, const SamplingWindow& window);

/// Sample variance of the window integrals Y_k divided by the window length.
IafEstimate estimate_iaf(const std::vector<double>& window_integrals, double window_length,
                         const std::string& label = "");

/// Stationary bounds sqrt(tau_pi(f)) * sqrt(v^T I_H v) for each observable
/// and direction (columns of `directions`, identity by default).
/// NegativeQuadraticForm when a quadratic form is negative beyond rounding.
SensitivityBoundReport combine_bounds(const FimEstimate& fim, const std::vector<IafEstimate>& iafs,
                                      const Matrix& directions,
                                      const std::vector<std::string>& direction_labels);

/// Transient-regime bound sqrt(varhat) * sqrt(v^T (T * FIM) v).
double transient_bound(double varhat, const Matrix& fim, double horizon, const Vector& v);

}  // namespace parrep
