#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "parrep/sensitivity.hpp"
#include "parrep/ssa.hpp"
#include "stats.hpp"

using namespace parrep;

TEST_CASE("fim_sample requires window material") {
    const ReactionNetwork net = builtin_schlogl();
    TrajectoryAccumulator no_window(&net, {Observable::population("X", 0)});
    CHECK_THROWS_AS(fim_sample(no_window), EmptyWindowError);

    SsaOptions opts;
    opts.window = SamplingWindow{50.0, 100.0};
    opts.collect_fim = true;
    RngStream rng(1, StreamKey{});
    const TrajectoryAccumulator acc =
        run_ssa(net, State::Constant(1, 25), 100.0, {Observable::population("X", 0)}, rng, opts);
    CHECK(acc.window_time() == doctest::Approx(50.0).epsilon(1e-12));
    const Matrix f = fim_sample(acc);
    CHECK(f.rows() == 4);
    // entry (3,3) of the window-averaged integrand is V/c3 = 200 identically
    CHECK(f(2, 2) == doctest::Approx(200.0).epsilon(1e-9));
}

TEST_CASE("accumulate_fim averages samples with normal CIs") {
    Matrix a = Matrix::Constant(2, 2, 1.0);
    Matrix b = Matrix::Constant(2, 2, 3.0);
    const FimEstimate est = accumulate_fim({a, b}, SamplingWindow{0.0, 1.0});
    CHECK(est.matrix(0, 0) == doctest::Approx(2.0));
    // sample var = 2, SE = 1, half width = 1.96
    CHECK(est.half_widths(1, 1) == doctest::Approx(1.96));
    CHECK(est.n_traj == 2);
    CHECK_THROWS_AS(accumulate_fim({}, SamplingWindow{0.0, 1.0}), InsufficientSamplesError);
}

TEST_CASE("estimate_iaf is the across-trajectory variance over the window length") {
    const IafEstimate iaf = estimate_iaf({1.0, 3.0, 5.0}, 2.0, "f");
    // var = 4, window 2 -> 2
    CHECK(iaf.value == doctest::Approx(2.0));
    CHECK(iaf.n_traj == 3);
    CHECK_THROWS_AS(estimate_iaf({1.0}, 2.0, "f"), InsufficientSamplesError);
    CHECK_THROWS_AS(estimate_iaf({1.0, 2.0}, 0.0, "f"), EmptyWindowError);
}

TEST_CASE("combine_bounds reproduces hand arithmetic") {
    FimEstimate fim;
    fim.matrix = Matrix::Zero(4, 4);
    fim.matrix.diagonal() << 87.5, 1670.0, 200.0, 24.6;
    fim.half_widths = Matrix::Zero(4, 4);
    fim.n_traj = 100;

    const IafEstimate iaf{"X", 5.87e5, 100, 1e5};
    const Matrix dirs = Matrix::Identity(4, 4);
    const SensitivityBoundReport report =
        combine_bounds(fim, {iaf}, dirs, {"c1", "c2", "c3", "c4"});
    REQUIRE(report.bounds.size() == 4);
    CHECK(report.bounds[2].bound == doctest::Approx(std::sqrt(5.87e5 * 200.0)).epsilon(1e-12));
    CHECK(report.bounds[2].bound == doctest::Approx(1.0835e4).epsilon(1e-3));
    CHECK(report.bounds[0].bound == doctest::Approx(7.167e3).epsilon(1e-3));
    CHECK(report.bounds[0].observable == "X");
    CHECK(report.bounds[0].parameter == "c1");
}

TEST_CASE("negative quadratic forms beyond round-off raise") {
    FimEstimate fim;
    fim.matrix = Matrix::Identity(2, 2);
    fim.matrix(0, 0) = -1.0;
    fim.half_widths = Matrix::Zero(2, 2);
    const IafEstimate iaf{"f", 1.0, 10, 1.0};
    Matrix dirs(2, 1);
    dirs << 1.0, 0.0;
    CHECK_THROWS_AS(combine_bounds(fim, {iaf}, dirs, {"v"}), NegativeQuadraticFormError);

    // tiny negative eigenvalues from round-off clamp to zero instead
    fim.matrix(0, 0) = -1e-16;
    const SensitivityBoundReport report = combine_bounds(fim, {iaf}, dirs, {"v"});
    CHECK(report.bounds[0].bound == 0.0);
}

TEST_CASE("transient bound arithmetic") {
    Matrix fim = Matrix::Identity(2, 2) * 4.0;
    Vector v(2);
    v << 1.0, 0.0;
    // sqrt(varhat) * sqrt(T * v'Fv) = sqrt(9) * sqrt(2 * 4)
    CHECK(transient_bound(9.0, fim, 2.0, v) == doctest::Approx(3.0 * std::sqrt(8.0)));
    CHECK_THROWS_AS(transient_bound(-1.0, fim, 2.0, v), Error);
}

TEST_CASE("window integrals feed a plausible schlogl IAF") {
    // Short sanity run: the IAF estimator applied to windowed integrals of X
    // is positive and finite; the full-scale comparison lives in the
    // acceptance suite.
    const ReactionNetwork net = builtin_schlogl();
    SsaOptions opts;
    opts.window = SamplingWindow{500.0, 1500.0};
    std::vector<double> ys;
    for (int i = 0; i < 8; ++i) {
        RngStream rng(derive_seed(3, static_cast<std::uint64_t>(i)), StreamKey{});
        const TrajectoryAccumulator acc = run_ssa(net, State::Constant(1, 25), 1500.0,
                                                  {Observable::population("X", 0)}, rng, opts);
        ys.push_back(acc.window_integrals()[0]);
    }
    const IafEstimate iaf = estimate_iaf(ys, 1000.0, "X");
    CHECK(iaf.value > 0.0);
    CHECK(std::isfinite(iaf.value));
}
