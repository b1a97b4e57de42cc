#include "parrep/ssa.hpp"

namespace parrep {

int pick_channel(const Vector& lambda, double total, double u) {
    double target = u * total;
    double cum = 0.0;
    const int m = static_cast<int>(lambda.size());
    for (int j = 0; j < m; ++j) {
        cum += lambda[j];
        if (target < cum) return j;
    }
    // float round-off on the last partial sum: fall back to the last
    // positive channel
    for (int j = m - 1; j >= 0; --j) {
        if (lambda[j] > 0.0) return j;
    }
    return m - 1;
}

Jump draw_jump(const ReactionNetwork& net, const State& x, RngStream& rng) {
    const Vector lambda = evaluate_propensities(net, x);
    const double total = lambda.sum();
    if (total <= 0.0) throw AbsorbingStateError(x, std::nullopt);
    const double tau = rng.exponential(total);
    const int j = pick_channel(lambda, total, rng.uniform());
    return {tau, j};
}

int embedded_step(const ReactionNetwork& net, const State& x, RngStream& rng) {
    const Vector lambda = evaluate_propensities(net, x);
    const double total = lambda.sum();
    if (total <= 0.0) throw AbsorbingStateError(x, std::nullopt);
    return pick_channel(lambda, total, rng.uniform());
}

TrajectoryAccumulator run_ssa(const ReactionNetwork& net, const State& x0, double t_end,
                              const std::vector<Observable>& observables, RngStream& rng,
                              const SsaOptions& opts) {
    TrajectoryAccumulator acc(&net, observables, opts.histogram, opts.window, opts.collect_fim,
                              opts.sample_stride);
    State x = x0;
    while (acc.clock() < t_end) {
        Jump jump;
        try {
            jump = draw_jump(net, x, rng);
        } catch (AbsorbingStateError&) {
            throw AbsorbingStateError(x, std::move(acc));
        }
        if (acc.clock() + jump.tau >= t_end) {
            acc.deposit(x, t_end - acc.clock());
            break;
        }
        acc.deposit(x, jump.tau);
        acc.count_jump(jump.channel);
        apply_reaction(net, jump.channel, x);
    }
    return acc;
}

}  // namespace parrep
