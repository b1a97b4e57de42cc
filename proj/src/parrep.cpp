#include "parrep/parrep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace parrep {

namespace {

double wall_now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

int uniform_index(double u, int size) {
    const int i = static_cast<int>(u * size);
    return i >= size ? size - 1 : i;
}

}  // namespace

DecorrelateResult decorrelate(const ReactionNetwork& net, const State& x,
                              const RegionMap& region_map, long n_c, double t_end,
                              TrajectoryAccumulator& acc, RngStream& rng) {
    State s = x;
    int region = region_map.region_of(s);
    long consecutive = 0;
    long jumps = 0;
    while (consecutive < n_c) {
        if (acc.clock() >= t_end) return {s, false, jumps};
        const Jump jump = draw_jump(net, s, rng);
        if (acc.clock() + jump.tau >= t_end) {
            acc.deposit(s, t_end - acc.clock());
            return {s, false, jumps};
        }
        acc.deposit(s, jump.tau);
        acc.count_jump(jump.channel);
        apply_reaction(net, jump.channel, s);
        ++jumps;
        const int post = region_map.region_of(s);
        if (post == region) {
            ++consecutive;
        } else {
            region = post;
            consecutive = 0;
        }
    }
    return {s, true, jumps};
}

namespace {

// One replica of the embedded chain advanced through lockstep rounds
// (from_round, to_round].  Draw for round t sits at stream counter t-1, so a
// segment can be re-simulated after a Fleming-Viot restart without any
// bookkeeping of consumed draws.  States after each round are written into
// path[t - base - 1]; returns the first exit round, or 0 if none.
long simulate_dephase_segment(const ReactionNetwork& net, const RegionMap& region_map,
                              int home_region, State s, const RngStream& stream, long base,
                              long from_round, long to_round, std::vector<State>& path) {
    for (long t = from_round + 1; t <= to_round; ++t) {
        const Vector lambda = evaluate_propensities(net, s);
        const double total = lambda.sum();
        if (total <= 0.0) throw AbsorbingStateError(s, std::nullopt);
        const int j = pick_channel(lambda, total, stream.uniform_at(t - 1));
        s += net.reactions[j].stoich;
        path[t - base - 1] = s;
        if (region_map.region_of(s) != home_region) return t;
    }
    return 0;
}

}  // namespace

std::vector<State> dephase(const ReactionNetwork& net, const State& x_anchor,
                           const RegionMap& region_map, long n_p, int replicas,
                           std::uint64_t seed, std::uint64_t cycle, ThreadPool& pool,
                           long batch_rounds, long* restarts_out) {
    const int home = region_map.region_of(x_anchor);
    std::vector<State> cur(replicas, x_anchor);
    long restarts = 0;
    // Single-replica degeneracy: ParRep with R = 1 is exactly serial SSA, so
    // preparation is a no-op (there is no survivor to resample from anyway).
    if (n_p <= 0 || replicas == 1) {
        if (restarts_out) *restarts_out = 0;
        return cur;
    }

    std::vector<RngStream> streams;
    streams.reserve(replicas);
    for (int r = 0; r < replicas; ++r)
        streams.emplace_back(seed, StreamKey{static_cast<std::uint32_t>(r), Phase::Dephase, cycle, 0});
    RngStream resample(seed, StreamKey{0, Phase::Resample, cycle, 0});

    std::vector<std::vector<State>> path(replicas);
    std::vector<long> exit_round(replicas, 0);

    long round = 0;
    while (round < n_p) {
        const long len = std::min(batch_rounds, n_p - round);
        for (int r = 0; r < replicas; ++r) path[r].resize(len);
        pool.parallel_for_each(static_cast<std::size_t>(replicas), [&](std::size_t r) {
            exit_round[r] = simulate_dephase_segment(net, region_map, home, cur[r], streams[r],
                                                     round, round, round + len, path[r]);
        });

        // Resolve exits in increasing round order; restarted replicas are
        // re-simulated over the remainder of the batch and may exit again.
        while (true) {
            long n0 = std::numeric_limits<long>::max();
            for (int r = 0; r < replicas; ++r) {
                if (exit_round[r] > 0) n0 = std::min(n0, exit_round[r]);
            }
            if (n0 == std::numeric_limits<long>::max()) break;

            std::vector<int> survivors;
            std::vector<int> exiting;
            for (int r = 0; r < replicas; ++r) {
                if (exit_round[r] == n0) {
                    exiting.push_back(r);
                } else if (exit_round[r] == 0 || exit_round[r] > n0) {
                    survivors.push_back(r);
                }
            }
            if (survivors.empty())
                throw AllReplicasExitedError(
                    "all " + std::to_string(replicas) +
                    " replicas left the region in dephasing round " + std::to_string(n0));

            for (int r : exiting) {
                const int donor = survivors[uniform_index(resample.uniform(),
                                                          static_cast<int>(survivors.size()))];
                path[r][n0 - round - 1] = path[donor][n0 - round - 1];
                ++restarts;
            }
            pool.parallel_for_each(exiting.size(), [&](std::size_t i) {
                const int r = exiting[i];
                exit_round[r] =
                    simulate_dephase_segment(net, region_map, home, path[r][n0 - round - 1],
                                             streams[r], round, n0, round + len, path[r]);
            });
        }

        for (int r = 0; r < replicas; ++r) cur[r] = path[r][len - 1];
        round += len;
    }
    if (restarts_out) *restarts_out = restarts;
    return cur;
}

namespace {

// Jumps of one replica across a batch of parallel-phase rounds.  tau and J
// for round t sit at stream counters 2(t-1) and 2(t-1)+1.
struct ReplicaBatch {
    std::vector<Jump> jumps;  // filled for rounds (base, base + n_filled]
    long n_filled = 0;
    long exit_round = 0;  // 0 = stayed inside the region through the batch
};

void simulate_parallel_segment(const ReactionNetwork& net, const RegionMap& region_map,
                               int home_region, State s, const RngStream& stream, long base,
                               long len, ReplicaBatch& out) {
    out.jumps.resize(len);
    out.n_filled = 0;
    out.exit_round = 0;
    for (long t = base + 1; t <= base + len; ++t) {
        const Vector lambda = evaluate_propensities(net, s);
        const double total = lambda.sum();
        if (total <= 0.0) throw AbsorbingStateError(s, std::nullopt);
        const std::uint64_t ctr = 2 * static_cast<std::uint64_t>(t - 1);
        const double tau = -std::log1p(-stream.uniform_at(ctr)) / total;
        const int j = pick_channel(lambda, total, stream.uniform_at(ctr + 1));
        out.jumps[t - base - 1] = {tau, j};
        out.n_filled = t - base;
        s += net.reactions[j].stoich;
        if (region_map.region_of(s) != home_region) {
            out.exit_round = t;
            return;
        }
    }
}

}  // namespace

ParallelOutcome parallel_phase(const ReactionNetwork& net, const std::vector<State>& states,
                               const RegionMap& region_map, double t_end,
                               TrajectoryAccumulator& acc, std::uint64_t seed,
                               std::uint64_t cycle, ThreadPool& pool, long batch_rounds) {
    const int replicas = static_cast<int>(states.size());
    const int home = region_map.region_of(states[0]);

    std::vector<RngStream> streams;
    streams.reserve(replicas);
    for (int r = 0; r < replicas; ++r)
        streams.emplace_back(seed,
                             StreamKey{static_cast<std::uint32_t>(r), Phase::Parallel, cycle, 0});

    std::vector<State> cur = states;
    std::vector<ReplicaBatch> batch(replicas);
    long round = 0;

    while (true) {
        const long len = batch_rounds;
        pool.parallel_for_each(static_cast<std::size_t>(replicas), [&](std::size_t r) {
            simulate_parallel_segment(net, region_map, home, cur[r], streams[r], round, len,
                                      batch[r]);
        });

        long exit_at = std::numeric_limits<long>::max();
        int exit_replica = 0;  // 1-based K
        for (int r = 0; r < replicas; ++r) {
            if (batch[r].exit_round > 0 && batch[r].exit_round < exit_at) {
                exit_at = batch[r].exit_round;
                exit_replica = r + 1;
            }
        }
        const bool has_exit = exit_at != std::numeric_limits<long>::max();
        const long stop = has_exit ? exit_at : round + len;

        // Ordered accumulation: round by round, replicas 1..K within the
        // round.  The t_end truncation applies inside this order.
        for (long t = round + 1; t <= stop; ++t) {
            const int k = (has_exit && t == stop) ? exit_replica : replicas;
            for (int r = 0; r < k; ++r) {
                const Jump& jump = batch[r].jumps[t - round - 1];
                if (acc.clock() + jump.tau >= t_end) {
                    acc.deposit(cur[r], t_end - acc.clock());
                    return {cur[r], t, r + 1, true};
                }
                acc.deposit(cur[r], jump.tau);
                acc.count_jump(jump.channel);
                apply_reaction(net, jump.channel, cur[r]);
            }
            if (has_exit && t == stop) {
                return {cur[exit_replica - 1], t, exit_replica, false};
            }
        }
        round = stop;
    }
}

ParRepReport run_parrep(const ReactionNetwork& net, const State& x0, const RegionMap& region_map,
                        const ParRepParams& params, const std::vector<Observable>& observables,
                        const SsaOptions& opts) {
    ThreadPool pool(params.workers);
    ParRepReport report;
    report.acc = TrajectoryAccumulator(&net, observables, opts.histogram, opts.window,
                                       opts.collect_fim, opts.sample_stride);
    State x = x0;
    std::uint64_t cycle = 0;

    try {
        while (report.acc.clock() < params.t_end) {
            double wall0 = wall_now();
            double clock0 = report.acc.clock();
            RngStream dec_rng(params.seed, StreamKey{0, Phase::Decorrelate, cycle, 0});
            const DecorrelateResult dec = decorrelate(net, x, region_map, params.n_c,
                                                      params.t_end, report.acc, dec_rng);
            x = dec.state;
            report.phases.push_back({PhaseKind::Decorrelate, static_cast<long>(cycle),
                                     region_map.region_of(x), dec.jumps,
                                     report.acc.clock() - clock0, wall_now() - wall0, 0, 0});
            if (!dec.reached_qsd) break;

            wall0 = wall_now();
            long restarts = 0;
            const std::vector<State> prepared =
                dephase(net, x, region_map, params.n_p, params.replicas, params.seed, cycle, pool,
                        params.batch_rounds, &restarts);
            report.phases.push_back({PhaseKind::Dephase, static_cast<long>(cycle),
                                     region_map.region_of(x), params.n_p, 0.0,
                                     wall_now() - wall0, restarts, 0});

            wall0 = wall_now();
            clock0 = report.acc.clock();
            const ParallelOutcome out =
                parallel_phase(net, prepared, region_map, params.t_end, report.acc, params.seed,
                               cycle, pool, params.batch_rounds);
            report.phases.push_back({PhaseKind::Parallel, static_cast<long>(cycle),
                                     region_map.region_of(x), out.n_star,
                                     report.acc.clock() - clock0, wall_now() - wall0, 0,
                                     out.exit_replica});
            x = out.exit_state;
            ++cycle;
            if (out.hit_t_end) break;
        }
    } catch (const Error& e) {
        report.final_state = x;
        report.cycles = static_cast<long>(cycle);
        throw ParRepPhaseError(e.what(), std::move(report));
    }

    report.final_state = x;
    report.cycles = static_cast<long>(cycle);
    return report;
}

}  // namespace parrep
