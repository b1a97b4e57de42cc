#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parrep/ssa.hpp"
#include "stats.hpp"

using namespace parrep;

namespace {

ReactionNetwork pure_death() {
    ReactionNetwork net;
    net.name = "pure-death";
    net.species_names = {"A"};
    net.params.names = {"k"};
    net.params.values = Vector::Ones(1);
    Reaction r;
    r.stoich = State::Constant(1, -1);
    r.propensity = MassActionProduct{{0}, 1.0, {1}, 0};
    net.reactions.push_back(std::move(r));
    return net;
}

}  // namespace

TEST_CASE("draw_jump consumes exactly two uniforms") {
    const ReactionNetwork net = builtin_schlogl();
    RngStream rng(3, StreamKey{});
    const State x = State::Constant(1, 25);
    draw_jump(net, x, rng);
    CHECK(rng.counter() == 2);
    draw_jump(net, x, rng);
    CHECK(rng.counter() == 4);

    RngStream rng2(3, StreamKey{});
    const Jump j1 = draw_jump(net, x, rng2);
    rng2.seek(0);
    const Jump j2 = draw_jump(net, x, rng2);
    CHECK(j1.tau == j2.tau);
    CHECK(j1.channel == j2.channel);
}

TEST_CASE("embedded_step consumes one uniform and is deterministic at x = 0") {
    const ReactionNetwork net = builtin_schlogl();
    RngStream rng(3, StreamKey{});
    // at x = 0 only the inflow channel c3*V can fire
    for (int i = 0; i < 10; ++i) CHECK(embedded_step(net, State::Zero(1), rng) == 2);
    CHECK(rng.counter() == 10);
}

TEST_CASE("draw_jump at x = 0 gives Exp(12.5) holding times") {
    const ReactionNetwork net = builtin_schlogl();
    RngStream rng(17, StreamKey{});
    std::vector<double> taus;
    for (int i = 0; i < 100000; ++i) {
        const Jump j = draw_jump(net, State::Zero(1), rng);
        CHECK(j.channel == 2);
        taus.push_back(j.tau);
    }
    std::sort(taus.begin(), taus.end());
    double d = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double f = 1.0 - std::exp(-12.5 * taus[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / taus.size()));
        d = std::max(d, std::abs(f - static_cast<double>(i) / taus.size()));
    }
    CHECK(d < teststat::ks_critical(0.01, taus.size()));
}

TEST_CASE("channel frequencies at x = 25 match the propensity proportions") {
    const ReactionNetwork net = builtin_schlogl();
    const State x = State::Constant(1, 25);
    const Vector lambda = evaluate_propensities(net, x);
    const double total = lambda.sum();
    RngStream rng(23, StreamKey{});
    const int n = 100000;
    Eigen::Vector4d counts = Eigen::Vector4d::Zero();
    for (int i = 0; i < n; ++i) counts[draw_jump(net, x, rng).channel] += 1.0;
    for (int j = 0; j < 4; ++j) {
        const double p = lambda[j] / total;
        const double sigma = std::sqrt(n * p * (1.0 - p));
        CHECK(std::abs(counts[j] - n * p) < 3.0 * sigma);
    }
}

TEST_CASE("pick_channel respects cumulative boundaries") {
    Vector lambda(3);
    lambda << 1.0, 2.0, 3.0;
    CHECK(pick_channel(lambda, 6.0, 0.0) == 0);
    CHECK(pick_channel(lambda, 6.0, 0.16) == 0);
    CHECK(pick_channel(lambda, 6.0, 0.17) == 1);
    CHECK(pick_channel(lambda, 6.0, 0.49) == 1);
    CHECK(pick_channel(lambda, 6.0, 0.51) == 2);
    CHECK(pick_channel(lambda, 6.0, 0.999999) == 2);
    // zero-propensity channels are never chosen
    Vector withzero(3);
    withzero << 0.0, 1.0, 0.0;
    CHECK(pick_channel(withzero, 1.0, 0.0) == 1);
    CHECK(pick_channel(withzero, 1.0, 0.999999) == 1);
}

TEST_CASE("run_ssa truncates the final interval exactly") {
    const ReactionNetwork net = builtin_schlogl();
    const std::vector<Observable> obs = {Observable::constant("one", 1.0),
                                         Observable::population("X", 0)};
    RngStream rng(5, StreamKey{});
    SsaOptions opts;
    opts.histogram = HistogramSpec{0, 0.0, 1.0, 150};
    const TrajectoryAccumulator acc =
        run_ssa(net, State::Constant(1, 25), 123.0, obs, rng, opts);
    CHECK(acc.clock() == 123.0);
    CHECK(acc.integrals()[0] == doctest::Approx(123.0).epsilon(1e-12));
    double mass = 0.0;
    for (double m : acc.histogram()) mass += m;
    CHECK(mass == doctest::Approx(123.0).epsilon(1e-9));
}

TEST_CASE("pure-death extinction time matches the harmonic sum") {
    const ReactionNetwork net = pure_death();
    const std::vector<Observable> obs = {Observable::constant("one", 1.0)};
    const int n = 10000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream rng(derive_seed(31, static_cast<std::uint64_t>(i)), StreamKey{});
        State x = State::Constant(1, 5);
        double t = 0.0;
        while (x[0] > 0) {
            const Jump j = draw_jump(net, x, rng);
            t += j.tau;
            apply_reaction(net, j.channel, x);
        }
        sum += t;
        sumsq += t * t;
    }
    const double mean = sum / n;
    const double expected = 1.0 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("absorbing state raises with the partial accumulator") {
    const ReactionNetwork net = pure_death();
    const std::vector<Observable> obs = {Observable::constant("one", 1.0)};
    RngStream rng(1, StreamKey{});
    try {
        run_ssa(net, State::Constant(1, 3), 1e9, obs, rng);
        FAIL("expected AbsorbingStateError");
    } catch (const AbsorbingStateError& e) {
        CHECK(e.state[0] == 0);
        REQUIRE(e.partial.has_value());
        CHECK(e.partial->clock() > 0.0);
        CHECK(e.partial->jump_counts()[0] == 3);
    }
}
