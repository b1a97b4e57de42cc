#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parrep/parrep.hpp"
#include "stats.hpp"

using namespace parrep;

namespace {

const RegionMap kToyRegion{0, 4.5, true, {"inside", "outside"}};

std::vector<Observable> schlogl_obs() {
    return {Observable::population("X", 0)};
}

std::string fingerprint(const ParRepReport& r) {
    std::ostringstream ss;
    ss << std::setprecision(17) << r.acc.clock() << "|" << r.cycles << "|"
       << r.final_state.transpose() << "|" << r.acc.integrals().transpose();
    for (long c : r.acc.jump_counts()) ss << "," << c;
    return ss.str();
}

}  // namespace

TEST_CASE("toy-chain QSD oracle matches the frozen eigensolve") {
    const ReactionNetwork net = teststat::toy_chain();
    const auto oracle = teststat::embedded_qsd(net, 4);
    const Vector frozen =
        (Vector(5) << 0.05412, 0.18285, 0.29742, 0.29532, 0.17028).finished();
    for (int i = 0; i < 5; ++i) CHECK(oracle.qsd[i] == doctest::Approx(frozen[i]).epsilon(2e-4));
    CHECK(oracle.rho == doctest::Approx(0.88915).epsilon(1e-4));
}

TEST_CASE("decorrelate rebinds the tracked region on crossings") {
    const ReactionNetwork net = teststat::toy_chain();
    TrajectoryAccumulator acc(&net, schlogl_obs());
    RngStream rng(4, StreamKey{0, Phase::Decorrelate, 0, 0});
    const DecorrelateResult res =
        decorrelate(net, State::Zero(1), kToyRegion, 50, 1e9, acc, rng);
    CHECK(res.reached_qsd);
    CHECK(res.jumps >= 50);
    CHECK(acc.clock() > 0.0);
    // the result certifies 50 consecutive jumps inside one region
    CHECK(acc.integrals()[0] >= 0.0);
}

TEST_CASE("decorrelate stops at t_end and reports no QSD") {
    const ReactionNetwork net = builtin_schlogl();
    TrajectoryAccumulator acc(&net, schlogl_obs());
    RngStream rng(4, StreamKey{0, Phase::Decorrelate, 0, 0});
    const DecorrelateResult res = decorrelate(net, State::Constant(1, 25),
                                              schlogl_region_map(), 1000000000, 5.0, acc, rng);
    CHECK_FALSE(res.reached_qsd);
    CHECK(acc.clock() == 5.0);
}

TEST_CASE("parrep with t_end inside the first decorrelation equals plain SSA") {
    const ReactionNetwork net = builtin_schlogl();
    ParRepParams params;
    params.n_c = 1000000000;  // never reached before t_end
    params.n_p = 10;
    params.replicas = 4;
    params.t_end = 50.0;
    params.seed = 9;
    const ParRepReport report = run_parrep(net, State::Constant(1, 25), schlogl_region_map(),
                                           params, schlogl_obs());

    RngStream rng(9, StreamKey{0, Phase::Decorrelate, 0, 0});
    const TrajectoryAccumulator ssa =
        run_ssa(net, State::Constant(1, 25), 50.0, schlogl_obs(), rng);
    CHECK(report.acc.clock() == ssa.clock());
    CHECK(report.acc.integrals()[0] == ssa.integrals()[0]);
    CHECK(report.acc.jump_counts() == ssa.jump_counts());
    CHECK(report.cycles == 0);
    for (const PhaseRecord& ph : report.phases) CHECK(ph.kind == PhaseKind::Decorrelate);
}

TEST_CASE("dephase returns R in-region states and restarts exits") {
    const ReactionNetwork net = teststat::toy_chain();
    ThreadPool pool(1);
    long restarts = 0;
    const std::vector<State> prepared =
        dephase(net, State::Zero(1), kToyRegion, 500, 16, 33, 0, pool, 4096, &restarts);
    REQUIRE(prepared.size() == 16);
    for (const State& s : prepared) CHECK(kToyRegion.region_of(s) == 0);
    CHECK(restarts > 0);  // 500 rounds in a leaky region must see exits
}

TEST_CASE("dephase raises when every replica exits simultaneously") {
    // +2 jumps from a one-state region {0}: both replicas exit every round
    ReactionNetwork net = teststat::toy_chain(1e-12, 5.0, 1e-12);
    const RegionMap tiny{0, 0.5, true, {"in", "out"}};
    ThreadPool pool(1);
    CHECK_THROWS_AS(dephase(net, State::Zero(1), tiny, 10, 2, 1, 0, pool, 4096, nullptr),
                    AllReplicasExitedError);
}

TEST_CASE("parallel phase accounts rounds in replica-minor order") {
    const ReactionNetwork net = teststat::toy_chain();
    const auto oracle = teststat::embedded_qsd(net, 4);
    // start all replicas at 2 (mid-region) and let the phase find an exit
    const std::vector<State> states(8, State::Constant(1, 2));
    TrajectoryAccumulator acc(&net, schlogl_obs());
    ThreadPool pool(1);
    const ParallelOutcome out =
        parallel_phase(net, states, kToyRegion, 1e9, acc, 77, 0, pool, 4096);
    CHECK_FALSE(out.hit_t_end);
    CHECK(out.n_star >= 1);
    CHECK(out.exit_replica >= 1);
    CHECK(out.exit_replica <= 8);
    CHECK(kToyRegion.region_of(out.exit_state) == 1);
    // T_s gains R tau per full round and K tau on the exit round
    CHECK(acc.clock() > 0.0);
}

TEST_CASE("parallel phase truncates at t_end") {
    const ReactionNetwork net = teststat::toy_chain();
    const std::vector<State> states(4, State::Constant(1, 2));
    TrajectoryAccumulator acc(&net, schlogl_obs());
    ThreadPool pool(1);
    const ParallelOutcome out =
        parallel_phase(net, states, kToyRegion, 0.25, acc, 11, 0, pool, 4096);
    CHECK(out.hit_t_end);
    CHECK(acc.clock() == 0.25);
}

TEST_CASE("reports are identical across worker counts and batch sizes") {
    const ReactionNetwork net = builtin_schlogl();
    ParRepParams params;
    params.n_c = 400;
    params.n_p = 400;
    params.replicas = 6;
    params.t_end = 400.0;
    params.seed = 123;

    params.workers = 1;
    const std::string base = fingerprint(
        run_parrep(net, State::Constant(1, 26), schlogl_region_map(), params, schlogl_obs()));

    for (int workers : {2, 4, 8}) {
        params.workers = workers;
        params.batch_rounds = 4096;
        CHECK(fingerprint(run_parrep(net, State::Constant(1, 26), schlogl_region_map(), params,
                                     schlogl_obs())) == base);
    }
    // batch size is a scheduling detail, not a semantic one
    for (long batch : {1L, 7L, 1000L}) {
        params.workers = 3;
        params.batch_rounds = batch;
        CHECK(fingerprint(run_parrep(net, State::Constant(1, 26), schlogl_region_map(), params,
                                     schlogl_obs())) == base);
    }
}

TEST_CASE("phase records cover the whole simulated time") {
    const ReactionNetwork net = builtin_schlogl();
    ParRepParams params;
    params.n_c = 300;
    params.n_p = 300;
    params.replicas = 4;
    params.t_end = 1000.0;
    params.seed = 5;
    const ParRepReport report = run_parrep(net, State::Constant(1, 26), schlogl_region_map(),
                                           params, schlogl_obs());
    CHECK(report.acc.clock() == 1000.0);
    double covered = 0.0;
    for (const PhaseRecord& ph : report.phases) {
        covered += ph.sim_time;
        if (ph.kind == PhaseKind::Dephase) CHECK(ph.sim_time == 0.0);
    }
    CHECK(covered == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(report.cycles >= 1);
}

TEST_CASE("thread pool runs every item exactly once and propagates errors") {
    ThreadPool pool(4);
    std::vector<std::atomic<int>> hits(1000);
    pool.parallel_for_each(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(pool.parallel_for_each(
                        10, [](std::size_t i) { if (i == 7) throw Error("boom"); }),
                    Error);
}
