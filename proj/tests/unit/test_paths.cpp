#include "saltlab/paths.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace saltlab;

namespace {

struct Moments {
    double mean = 0.0, var = 0.0;
};

template <class F>
Moments moments(int n, F&& sample) {
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample(i);
        s += x;
        s2 += x * x;
    }
    const double m = s / n;
    return {m, s2 / n - m * m};
}

}  // namespace

TEST_CASE("time grid nodes") {
    const TimeGrid g(0.0, 1.0, 10);
    CHECK(g.dt() == doctest::Approx(0.1));
    CHECK(g.node_index(0.3) == 3);
    CHECK_THROWS(g.node_index(0.35));
    CHECK_THROWS(TimeGrid(1.0, 0.0, 10));
    CHECK_THROWS(TimeGrid(0.0, 1.0, 0));
}

TEST_CASE("K = 0 path is the time grid") {
    const auto p = sample_brownian(TimeGrid(0.0, 1.0, 10), 0, 7);
    REQUIRE(p.n_components() == 1);
    for (std::size_t n = 0; n <= 10; ++n) CHECK(p.value(0, n) == 0.0 + double(n) * 0.1);
    CHECK(p.value(0, 10) == doctest::Approx(1.0));
    CHECK(p.kind(0) == ComponentKind::FiniteVariation);
}

TEST_CASE("sampling is deterministic and stream-stable in K") {
    const TimeGrid g(0.0, 1.0, 50);
    const auto a = sample_brownian(g, 3, 42), b = sample_brownian(g, 3, 42);
    CHECK(a == b);
    const auto c = sample_brownian(g, 5, 42);
    for (std::size_t j = 0; j <= 3; ++j)
        for (std::size_t n = 0; n <= 50; ++n) CHECK(a.value(j, n) == c.value(j, n));
    CHECK(a.kind(1) == ComponentKind::Martingale);
    for (std::size_t j = 1; j <= 3; ++j) CHECK(a.value(j, 0) == 0.0);
    CHECK_THROWS(sample_brownian(g, -1, 1));
}

TEST_CASE("Brownian terminal variance (Monte-Carlo)") {
    const TimeGrid g(0.0, 1.0, 4);
    const auto m = moments(100000, [&](int i) { return sample_brownian(g, 1, std::uint64_t(i)).value(1, 4); });
    CHECK(std::abs(m.mean) < 0.01);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Brownian increments have mean 0 and variance dt") {
    const TimeGrid g(0.0, 1.0, 20000);
    const auto p = sample_brownian(g, 2, 3);
    for (std::size_t j = 1; j <= 2; ++j) {
        const auto m = moments(20000, [&](int n) { return p.increment(j, std::size_t(n)); });
        const double se = std::sqrt(g.dt() / 20000.0);
        CHECK(std::abs(m.mean) < 3 * se);
        CHECK(m.var == doctest::Approx(g.dt()).epsilon(3 * std::sqrt(2.0 / 20000.0)));
    }
}

TEST_CASE("OU degenerate parameters") {
    const TimeGrid g(0.0, 1.0, 20);
    const auto zero = sample_ou(g, 2, 1.0, 0.0, 5);
    for (std::size_t n = 0; n <= 20; ++n) CHECK(zero.value(1, n) == 0.0);
    // theta = 0 is sigma times a Brownian motion on its own stream
    const auto flat = sample_ou(g, 1, 0.0, 2.0, 5);
    const auto m = moments(50000, [&](int i) { return sample_ou(TimeGrid(0.0, 1.0, 2), 1, 0.0, 1.0, std::uint64_t(i)).value(1, 2); });
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.03));
    CHECK(std::isfinite(flat.value(1, 20)));
    CHECK_THROWS(sample_ou(g, 1, -1.0, 1.0, 1));
    CHECK_THROWS(sample_ou(g, 1, 1.0, -1.0, 1));
}

TEST_CASE("OU variance at t = 2 (Monte-Carlo)") {
    // X0 = 0: Var X(2) = (1 - e^-4) / 2
    const TimeGrid g(0.0, 2.0, 20);
    const auto m = moments(100000, [&](int i) { return sample_ou(g, 1, 1.0, 1.0, std::uint64_t(i)).value(1, 20); });
    CHECK(m.var == doctest::Approx(0.5).epsilon(0.04));
    CHECK(m.var == doctest::Approx(0.5 * (1.0 - std::exp(-4.0))).epsilon(0.02));
}

TEST_CASE("refine keeps coarse nodes and rebuilds time") {
    const auto p = sample_brownian(TimeGrid(0.0, 1.0, 16), 2, 9);
    const auto r = refine(p, 2, 4);
    REQUIRE(r.grid().n_steps() == 32);
    for (std::size_t n = 0; n <= 32; ++n) CHECK(r.value(0, n) == r.grid().time(n));
    for (std::size_t j = 1; j <= 2; ++j)
        for (std::size_t n = 0; n <= 16; ++n) CHECK(r.value(j, 2 * n) == p.value(j, n));
    CHECK_THROWS(refine(p, 1, 4));
    const auto r0 = refine(sample_brownian(TimeGrid(0.0, 1.0, 4), 0, 1), 2, 1);
    CHECK(r0.grid().dt() == doctest::Approx(0.125));
}

TEST_CASE("bridge substep variance (Monte-Carlo)") {
    const TimeGrid g(0.0, 1.0, 1);
    const auto m = moments(100000, [&](int i) {
        const auto p = sample_brownian(g, 1, std::uint64_t(i));
        return refine(p, 2, std::uint64_t(i) + 77).increment(1, 0);
    });
    CHECK(m.var == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("path file round trip") {
    const auto p = sample_ou(TimeGrid(0.0, 0.5, 33), 3, 0.7, 1.3, 11);
    const auto file = std::filesystem::temp_directory_path() / "saltlab_path_roundtrip.smdp";
    write_path(file, p);
    const auto q = read_path(file);
    std::filesystem::remove(file);
    CHECK(q.grid().n_steps() == 33);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t n = 0; n <= 33; ++n) CHECK(q.value(j, n) == p.value(j, n));
}
