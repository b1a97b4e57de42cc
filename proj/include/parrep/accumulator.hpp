#pragma once

#include <optional>
#include <vector>

#include "parrep/model.hpp"
#include "parrep/observable.hpp"

namespace parrep {

/// Time-weighted histogram over one species coordinate.  Out-of-range values
/// are clamped into the edge bins so the total mass always equals the clock.
struct HistogramSpec {
    int species = 0;
    double lo = 0.0;
    double width = 1.0;
    int bins = 0;

    int bin_of(const State& x) const {
        const int b = static_cast<int>((static_cast<double>(x[species]) - lo) / width);
        return b < 0 ? 0 : (b >= bins ? bins - 1 : b);
    }
};

/// Sampling window [begin, end) in simulated time for the stationary
/// estimators (path-space FIM integrand and the window integrals Y).
struct SamplingWindow {
    double begin = 0.0;
    double end = 0.0;
    double length() const { return end - begin; }
};

struct PathSample {
    double t;
    State x;
};

/// Running statistics of one trajectory: simulation clock, per-observable
/// time integrals, time-weighted histogram, per-channel jump counts, and the
/// optional windowed FIM/variance material.  Deposits weight the pre-jump
/// state by its holding time; mergeable associatively across trajectories.
class TrajectoryAccumulator {
public:
    TrajectoryAccumulator() = default;
    TrajectoryAccumulator(const ReactionNetwork* net, std::vector<Observable> observables,
                          HistogramSpec histogram_spec = {},
                          std::optional<SamplingWindow> window = std::nullopt,
                          bool collect_fim = false, double sample_stride = 0.0);

    /// Occupancy of state x for dt units of simulated time starting at the
    /// current clock.  Advances the clock.
    void deposit(const State& x, double dt);

    void count_jump(int channel) { ++jump_counts_[channel]; }

    double clock() const { return clock_; }
    const Vector& integrals() const { return integrals_; }
    const std::vector<double>& histogram() const { return histogram_; }
    const std::vector<long>& jump_counts() const { return jump_counts_; }
    const std::vector<Observable>& observables() const { return observables_; }
    const HistogramSpec& histogram_spec() const { return hist_spec_; }

    bool has_window() const { return window_.has_value(); }
    const SamplingWindow& window() const { return *window_; }
    /// Simulated time actually deposited inside the window.
    double window_time() const { return window_time_; }
    /// Y = integral of each observable over the window.
    const Vector& window_integrals() const { return window_integrals_; }
    /// Integral over the window of sum_j lambda_j grad(log lambda_j) grad(log lambda_j)^T.
    const Matrix& fim_integral() const { return fim_integral_; }
    bool collects_fim() const { return collect_fim_; }

    const std::vector<PathSample>& path_samples() const { return path_samples_; }

    /// Associative merge across trajectories (clock, integrals, histogram,
    /// jump counts, window material all add).
    void merge(const TrajectoryAccumulator& other);

private:
    const ReactionNetwork* net_ = nullptr;
    std::vector<Observable> observables_;
    HistogramSpec hist_spec_;
    std::optional<SamplingWindow> window_;
    bool collect_fim_ = false;
    double sample_stride_ = 0.0;
    double next_sample_t_ = 0.0;

    double clock_ = 0.0;
    Vector integrals_;
    std::vector<double> histogram_;
    std::vector<long> jump_counts_;
    double window_time_ = 0.0;
    Vector window_integrals_;
    Matrix fim_integral_;
    std::vector<PathSample> path_samples_;
};

}  // namespace parrep
