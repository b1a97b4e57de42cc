#include "parrep/accumulator.hpp"

#include <algorithm>

#include "parrep/errors.hpp"

namespace parrep {

TrajectoryAccumulator::TrajectoryAccumulator(const ReactionNetwork* net,
                                             std::vector<Observable> observables,
                                             HistogramSpec histogram_spec,
                                             std::optional<SamplingWindow> window,
                                             bool collect_fim, double sample_stride)
    : net_(net),
      observables_(std::move(observables)),
      hist_spec_(histogram_spec),
      window_(window),
      collect_fim_(collect_fim),
      sample_stride_(sample_stride),
      next_sample_t_(0.0) {
    integrals_ = Vector::Zero(static_cast<int>(observables_.size()));
    histogram_.assign(std::max(hist_spec_.bins, 0), 0.0);
    jump_counts_.assign(net ? net->n_reactions() : 0, 0);
    window_integrals_ = Vector::Zero(static_cast<int>(observables_.size()));
    if (collect_fim_ && net) fim_integral_ = Matrix::Zero(net->n_params(), net->n_params());
}

void TrajectoryAccumulator::deposit(const State& x, double dt) {
    if (dt <= 0.0) {
        if (dt < 0.0) throw Error("negative holding time deposited");
        return;
    }
    for (int i = 0; i < integrals_.size(); ++i) integrals_[i] += observables_[i](x) * dt;
    if (!histogram_.empty()) histogram_[hist_spec_.bin_of(x)] += dt;

    if (sample_stride_ > 0.0) {
        while (next_sample_t_ < clock_ + dt) {
            path_samples_.push_back({next_sample_t_, x});
            next_sample_t_ += sample_stride_;
        }
    }

    if (window_) {
        const double lo = std::max(clock_, window_->begin);
        const double hi = std::min(clock_ + dt, window_->end);
        if (hi > lo) {
            const double w = hi - lo;
            window_time_ += w;
            for (int i = 0; i < window_integrals_.size(); ++i)
                window_integrals_[i] += observables_[i](x) * w;
            if (collect_fim_) {
                const Vector lambda = evaluate_propensities(*net_, x);
                const Matrix grad = propensity_gradients(*net_, x);
                for (int j = 0; j < lambda.size(); ++j) {
                    if (lambda[j] <= 0.0) continue;  // removable zero
                    const Vector g = grad.row(j).transpose() / lambda[j];
                    fim_integral_.noalias() += (w * lambda[j]) * (g * g.transpose());
                }
            }
        }
    }
    clock_ += dt;
}

void TrajectoryAccumulator::merge(const TrajectoryAccumulator& other) {
    clock_ += other.clock_;
    integrals_ += other.integrals_;
    if (histogram_.size() != other.histogram_.size())
        throw Error("cannot merge accumulators with different histogram shapes");
    for (std::size_t b = 0; b < histogram_.size(); ++b) histogram_[b] += other.histogram_[b];
    if (jump_counts_.size() != other.jump_counts_.size())
        throw Error("cannot merge accumulators of different networks");
    for (std::size_t j = 0; j < jump_counts_.size(); ++j) jump_counts_[j] += other.jump_counts_[j];
    window_time_ += other.window_time_;
    window_integrals_ += other.window_integrals_;
    if (collect_fim_ && other.collect_fim_) fim_integral_ += other.fim_integral_;
    path_samples_.insert(path_samples_.end(), other.path_samples_.begin(),
                         other.path_samples_.end());
}

}  // namespace parrep
