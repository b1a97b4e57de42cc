#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "parrep/rng.hpp"
#include "stats.hpp"

using namespace parrep;

TEST_CASE("streams replay bit-identically") {
    RngStream a(42, StreamKey{3, Phase::Parallel, 17, 1});
    std::vector<double> first;
    for (int i = 0; i < 100; ++i) first.push_back(a.uniform());

    RngStream b(42, StreamKey{3, Phase::Parallel, 17, 1});
    for (int i = 0; i < 100; ++i) CHECK(b.uniform() == first[static_cast<std::size_t>(i)]);

    // random access equals sequential consumption
    RngStream c(42, StreamKey{3, Phase::Parallel, 17, 1});
    CHECK(c.uniform_at(57) == first[57]);
    c.seek(99);
    CHECK(c.uniform() == first[99]);
}

TEST_CASE("distinct keys give distinct streams") {
    std::set<std::uint64_t> firsts;
    for (std::uint32_t r = 0; r < 50; ++r) {
        for (Phase ph : {Phase::Serial, Phase::Dephase, Phase::Parallel, Phase::Resample}) {
            RngStream s(123, StreamKey{r, ph, 5, 0});
            firsts.insert(s.bits_at(0));
        }
    }
    CHECK(firsts.size() == 200);
}

TEST_CASE("uniforms are in [0,1) and pass a KS test") {
    RngStream s(7, StreamKey{});
    std::vector<double> u;
    for (int i = 0; i < 100000; ++i) u.push_back(s.uniform());
    double d = 0.0;
    std::sort(u.begin(), u.end());
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(u[i] >= 0.0);
        CHECK(u[i] < 1.0);
        d = std::max(d, std::abs(u[i] - static_cast<double>(i + 1) / u.size()));
        d = std::max(d, std::abs(u[i] - static_cast<double>(i) / u.size()));
    }
    CHECK(d < teststat::ks_critical(0.01, u.size()));
}

TEST_CASE("exponential draws pass a KS test") {
    RngStream s(99, StreamKey{});
    const double rate = 3.5;
    std::vector<double> x;
    for (int i = 0; i < 100000; ++i) x.push_back(s.exponential(rate));
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = 1.0 - std::exp(-rate * x[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / x.size()));
        d = std::max(d, std::abs(f - static_cast<double>(i) / x.size()));
    }
    CHECK(d < teststat::ks_critical(0.01, x.size()));
}

TEST_CASE("cross-stream correlation is negligible") {
    RngStream a(5, StreamKey{0, Phase::Parallel, 0, 0});
    RngStream b(5, StreamKey{1, Phase::Parallel, 0, 0});
    const int n = 100000;
    double sxy = 0.0;
    for (int i = 0; i < n; ++i) sxy += (a.uniform() - 0.5) * (b.uniform() - 0.5);
    // Var of the product sum is n/144; 4 sigma band
    CHECK(std::abs(sxy) < 4.0 * std::sqrt(n / 144.0));
}

TEST_CASE("derive_seed separates trajectories") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(77, i));
    CHECK(seeds.size() == 1000);
    CHECK(derive_seed(77, 0) != derive_seed(78, 0));
}
