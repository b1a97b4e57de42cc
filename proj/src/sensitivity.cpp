#include "parrep/sensitivity.hpp"

#include <cmath>

#include "parrep/errors.hpp"

namespace parrep {

Matrix fim_sample(const TrajectoryAccumulator& acc) {
    if (!acc.has_window() || acc.window_time() <= 0.0)
        throw EmptyWindowError("no simulated time inside the sampling window");
    return acc.fim_integral() / acc.window_time();
}

FimEstimate accumulate_fim(const std::vector<Matrix>& samples, const SamplingWindow& window) {
    if (samples.empty()) throw InsufficientSamplesError("no FIM samples");
    const int l = static_cast<int>(samples.front().rows());
    Matrix mean = Matrix::Zero(l, l);
    for (const Matrix& s : samples) mean += s;
    mean /= static_cast<double>(samples.size());

    Matrix half = Matrix::Zero(l, l);
    if (samples.size() > 1) {
        Matrix var = Matrix::Zero(l, l);
        for (const Matrix& s : samples) var += (s - mean).cwiseProduct(s - mean);
        var /= static_cast<double>(samples.size() - 1);
        half = 1.96 * (var / static_cast<double>(samples.size())).cwiseSqrt();
    }
    return {mean, half, static_cast<int>(samples.size()), window};
}

IafEstimate estimate_iaf(const std::vector<double>& window_integrals, double window_length,
                         const std::string& label) {
    if (window_integrals.size() < 2)
        throw InsufficientSamplesError("IAF needs at least two trajectories");
    if (!(window_length > 0.0)) throw EmptyWindowError("IAF window has zero length");
    const double n = static_cast<double>(window_integrals.size());
    double mean = 0.0;
    for (double y : window_integrals) mean += y;
    mean /= n;
    double ss = 0.0;
    for (double y : window_integrals) ss += (y - mean) * (y - mean);
    return {label, ss / ((n - 1.0) * window_length), static_cast<int>(window_integrals.size()),
            window_length};
}

namespace {

double quadratic_form(const Matrix& fim, const Vector& v) {
    const double q = v.dot(fim * v);
    const double tol = 1e-12 * std::abs(fim.trace()) * v.squaredNorm();
    if (q < -tol)
        throw NegativeQuadraticFormError("v^T FIM v = " + std::to_string(q) +
                                         " is negative beyond rounding tolerance");
    return q < 0.0 ? 0.0 : q;
}

}  // namespace

SensitivityBoundReport combine_bounds(const FimEstimate& fim, const std::vector<IafEstimate>& iafs,
                                      const Matrix& directions,
                                      const std::vector<std::string>& direction_labels) {
    if (directions.rows() != fim.matrix.rows())
        throw Error("direction dimension does not match the FIM");
    SensitivityBoundReport report;
    report.fim = fim;
    report.iafs = iafs;
    for (const IafEstimate& iaf : iafs) {
        const double sqrt_iaf = std::sqrt(iaf.value);
        for (int d = 0; d < directions.cols(); ++d) {
            const double q = quadratic_form(fim.matrix, directions.col(d));
            report.bounds.push_back({iaf.label, direction_labels[d], sqrt_iaf * std::sqrt(q)});
        }
    }
    return report;
}

double transient_bound(double varhat, const Matrix& fim, double horizon, const Vector& v) {
    if (varhat < 0.0) throw Error("variance estimate must be nonnegative");
    return std::sqrt(varhat) * std::sqrt(horizon * quadratic_form(fim, v));
}

}  // namespace parrep
