#pragma once

#include <cstdint>
#include <vector>

#include "parrep/accumulator.hpp"
#include "parrep/model.hpp"
#include "parrep/observable.hpp"
#include "parrep/region.hpp"
#include "parrep/rng.hpp"
#include "parrep/ssa.hpp"
#include "parrep/thread_pool.hpp"

namespace parrep {

struct ParRepParams {
    long n_c = 1;      // decorrelation threshold (consecutive in-region jumps)
    long n_p = 1;      // dephasing threshold (lockstep rounds)
    int replicas = 2;  // R
    double t_end = 0.0;
    std::uint64_t seed = 0;
    int workers = 1;
    long batch_rounds = 4096;  // lockstep rounds simulated per synchronization
};

enum class PhaseKind { Decorrelate, Dephase, Parallel };

struct PhaseRecord {
    PhaseKind kind;
    long cycle = 0;
    int region = 0;
    long jumps = 0;  // decorrelation jumps, dephasing rounds, or N*
    double sim_time = 0.0;
    double wall_seconds = 0.0;
    long dephase_restarts = 0;
    int exit_replica = 0;  // K (1-based) for parallel phases
};

struct ParRepReport {
    TrajectoryAccumulator acc;
    std::vector<PhaseRecord> phases;
    State final_state;
    long cycles = 0;
};

/// A ParRep phase failed; carries whatever was simulated before the failure.
class ParRepPhaseError : public Error {
public:
    ParRepPhaseError(const std::string& what, ParRepReport partial)
        : Error(what), report(std::move(partial)) {}
    ParRepReport report;
};

struct DecorrelateResult {
    State state;
    bool reached_qsd;  // false when the clock hit t_end first
    long jumps;
};

/// Exact serial SSA until n_c consecutive post-jump states stay in one
/// region.  The tracked region re-binds on every crossing and the counter
/// resets to zero.
DecorrelateResult decorrelate(const ReactionNetwork& net, const State& x,
                              const RegionMap& region_map, long n_c, double t_end,
                              TrajectoryAccumulator& acc, RngStream& rng);

/// Fleming-Viot preparation of R approximately-QSD-distributed states in the
/// region of x_anchor.  Embedded-chain replicas advance in lockstep for n_p
/// rounds; a replica whose post-jump state leaves the region restarts from
/// the current state of a survivor chosen uniformly (dedicated resample
/// stream; simultaneous exits are reassigned in increasing replica index).
/// Contributes nothing to the accumulator.
std::vector<State> dephase(const ReactionNetwork& net, const State& x_anchor,
                           const RegionMap& region_map, long n_p, int replicas,
                           std::uint64_t seed, std::uint64_t cycle, ThreadPool& pool,
                           long batch_rounds = 4096, long* restarts_out = nullptr);

struct ParallelOutcome {
    State exit_state;
    long n_star = 0;    // lockstep rounds until the first exit
    int exit_replica = 0;  // K, 1-based
    bool hit_t_end = false;
};

/// Lockstep exploration of the exit event.  Per round, every replica draws
/// (tau, J) from its own stream; on the exit round only replicas 1..K
/// contribute their holding times and jumps (K = smallest exiting index),
/// otherwise all R contribute.  The clock and integrals accumulate in round
/// order, replicas 1..K within a round, so results are independent of the
/// worker count.
ParallelOutcome parallel_phase(const ReactionNetwork& net, const std::vector<State>& states,
                               const RegionMap& region_map, double t_end,
                               TrajectoryAccumulator& acc, std::uint64_t seed,
                               std::uint64_t cycle, ThreadPool& pool, long batch_rounds = 4096);

/// Full ParRep cycle loop: decorrelate -> dephase -> parallel until the
/// clock reaches t_end.  Bit-identical output for a fixed seed regardless of
/// the worker count.
ParRepReport run_parrep(const ReactionNetwork& net, const State& x0, const RegionMap& region_map,
                        const ParRepParams& params, const std::vector<Observable>& observables,
                        const SsaOptions& opts = {});

}  // namespace parrep
