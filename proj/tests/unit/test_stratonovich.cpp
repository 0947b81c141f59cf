#include "saltlab/stratonovich.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace saltlab;

namespace {

std::vector<double> copy(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("integral of dt") {
    const auto p = sample_brownian(TimeGrid(0.0, 1.0, 100), 1, 1);
    const std::vector<double> one(101, 1.0);
    CHECK(strat_integral(one, p, 0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // component 0: trapezoid of t^2 exactly
    std::vector<double> t2(101);
    double trap = 0.0;
    for (std::size_t n = 0; n <= 100; ++n) t2[n] = p.value(0, n) * p.value(0, n);
    for (std::size_t n = 0; n < 100; ++n) trap += 0.5 * (t2[n] + t2[n + 1]) * 0.01;
    CHECK(strat_integral(t2, p, 0, 0.0, 1.0) == doctest::Approx(trap).epsilon(1e-14));
}

TEST_CASE("int W o dW = W^2 / 2 per path") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto p = sample_brownian(TimeGrid(0.0, 2.0, 1000), 1, s);
        const auto W = copy(p.component(1));
        CHECK(strat_integral(W, p, 1, 0.0, 2.0) == doctest::Approx(0.5 * W.back() * W.back()).epsilon(1e-12));
    }
}

TEST_CASE("linearity, additivity and the Ito bridge") {
    const auto p = sample_brownian(TimeGrid(0.0, 1.0, 400), 2, 5);
    std::vector<double> f(401), g(401);
    for (std::size_t n = 0; n <= 400; ++n) {
        f[n] = std::sin(p.value(1, n)) + p.value(0, n);
        g[n] = p.value(2, n) * p.value(1, n);
    }
    std::vector<double> h(401);
    for (std::size_t n = 0; n <= 400; ++n) h[n] = 2.0 * f[n] - 3.0 * g[n];
    const double lin = 2.0 * strat_integral(f, p, 1, 0.0, 1.0) - 3.0 * strat_integral(g, p, 1, 0.0, 1.0);
    CHECK(strat_integral(h, p, 1, 0.0, 1.0) == doctest::Approx(lin).epsilon(1e-13));
    CHECK(strat_integral(f, p, 2, 0.0, 0.5) + strat_integral(f, p, 2, 0.5, 1.0) ==
          doctest::Approx(strat_integral(f, p, 2, 0.0, 1.0)).epsilon(1e-13));
    const auto W = copy(p.component(2));
    const double bridge = strat_integral(f, p, 2, 0.25, 1.0) - ito_sum(f, p, 2, 0.25, 1.0) -
                          0.5 * covariation(f, W, p.grid(), 0.25, 1.0);
    CHECK(std::abs(bridge) < 1e-14);
    CHECK_THROWS(strat_integral(f, p, 1, 0.5, 0.25));
    CHECK_THROWS(strat_integral(f, p, 1, 0.0, 0.1234));
}

TEST_CASE("W^2 integrand converges to W^3 / 3 at order 1") {
    // midpoint error per step is dW^3 / 6, so the pathwise error is O(dt)
    std::vector<double> hs, errs(6, 0.0);
    for (int l = 0; l < 6; ++l) hs.push_back(std::ldexp(1.0, -6 - l));
    for (std::uint64_t s = 0; s < 40; ++s) {
        auto p = sample_brownian(TimeGrid(0.0, 1.0, 64), 1, 17 + s);
        const double WT = p.value(1, 64);
        for (int l = 0; l < 6; ++l) {
            if (l) p = refine(p, 2, 100 * s + std::uint64_t(l));
            const auto W = copy(p.component(1));
            std::vector<double> f(W.size());
            for (std::size_t n = 0; n < W.size(); ++n) f[n] = W[n] * W[n];
            errs[std::size_t(l)] += std::abs(strat_integral(f, p, 1, 0.0, 1.0) - WT * WT * WT / 3.0) / 40.0;
            // discrete Ito sum plus half the realised covariation is the midpoint sum
            const double bridge = ito_sum(f, p, 1, 0.0, 1.0) + 0.5 * covariation(f, W, p.grid(), 0.0, 1.0);
            CHECK(bridge == doctest::Approx(strat_integral(f, p, 1, 0.0, 1.0)).epsilon(1e-12));
        }
    }
    CHECK(fitted_order(hs, errs) >= 0.9);
}

TEST_CASE("covariation of time, W and independent W") {
    const auto p = sample_brownian(TimeGrid(0.0, 1.0, 1000), 2, 23);
    const auto t = copy(p.component(0)), W1 = copy(p.component(1)), W2 = copy(p.component(2));
    CHECK(covariation(t, t, p.grid(), 0.0, 1.0) <= 1e-3 + 1e-15);
    CHECK(covariation(W1, W1, p.grid(), 0.0, 1.0) == doctest::Approx(1.0).epsilon(0.15));
    CHECK(std::abs(covariation(W1, W2, p.grid(), 0.0, 1.0)) < 0.1);
    CHECK_THROWS(covariation(t, std::vector<double>(5), p.grid(), 0.0, 1.0));
}

TEST_CASE("Heun deterministic limits") {
    const VectorMap decay = [](const StateVector& x) { return StateVector{-x[0]}; };
    StateVector x{1.0};
    const std::vector<double> dS{0.01};
    for (int n = 0; n < 100; ++n) x = heun_step(x, decay, {}, dS);
    CHECK(x[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));

    // zero diffusion reproduces classical Heun
    const std::vector<VectorMap> none{[](const StateVector&) { return StateVector{0.0}; }};
    StateVector a{0.3}, b{0.3};
    const VectorMap nl = [](const StateVector& y) { return StateVector{std::sin(y[0])}; };
    for (int n = 0; n < 50; ++n) {
        a = heun_step(a, nl, none, std::vector<double>{0.02, 0.37});
        const double k1 = std::sin(b[0]), k2 = std::sin(b[0] + 0.02 * k1);
        b[0] += 0.01 * (k1 + k2);
    }
    CHECK(a[0] == b[0]);
}

TEST_CASE("Heun strong order for dX = X o dW") {
    const VectorMap zero = [](const StateVector&) { return StateVector{0.0}; };
    const std::vector<VectorMap> mult{[](const StateVector& y) { return StateVector{y[0]}; }};
    std::vector<double> hs, errs(6, 0.0);
    for (int l = 0; l < 6; ++l) hs.push_back(std::ldexp(1.0, -5 - l));
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto p = sample_brownian(TimeGrid(0.0, 1.0, 32), 1, s);
        const double exact = std::exp(p.value(1, 32));
        for (int l = 0; l < 6; ++l) {
            if (l) p = refine(p, 2, s * 31 + std::uint64_t(l));
            StateVector x{1.0};
            for (std::size_t n = 0; n < p.grid().n_steps(); ++n) x = heun_step(x, zero, mult, p.increments(n));
            errs[std::size_t(l)] += std::abs(x[0] - exact) / 100.0;
        }
    }
    CHECK(fitted_order(hs, errs) >= 0.9);
}

TEST_CASE("Heun aborts on non-finite state") {
    const VectorMap blow = [](const StateVector& y) { return StateVector{y[0] / 0.0}; };
    CHECK_THROWS_AS(heun_step(StateVector{1.0}, blow, {}, std::vector<double>{0.1}), SolverAbort);
}

TEST_CASE("smooth indicator") {
    CHECK(smooth_indicator(0.5, 0.25, 0.75, 0.1) == 1.0);
    CHECK(smooth_indicator(0.1, 0.25, 0.75, 0.1) == 0.0);
    CHECK(smooth_indicator(0.2, 0.25, 0.75, 0.1) == doctest::Approx(0.5));
    for (double t = 0.0; t <= 1.0; t += 0.01) {
        const double v = smooth_indicator(t, 0.25, 0.75, 0.1);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("fundamental lemma harness") {
    const auto p = sample_brownian(TimeGrid(0.0, 1.0, 4096), 1, 3);
    const std::vector<double> zero(4097, 0.0), one(4097, 1.0);
    for (double e : fundamental_lemma_check(zero, p, 1, 0.25, 0.75, 6).errors) CHECK(e == 0.0);

    // F = 1 against dt: error is the ramp area, linear in width
    const auto r = fundamental_lemma_check(one, p, 0, 0.25, 0.75, 6);
    REQUIRE(r.errors.size() == 6);
    for (std::size_t m = 0; m < 6; ++m) CHECK(r.errors[m] == doctest::Approx(r.widths[m]).epsilon(1e-3));
    CHECK(fitted_order(r.widths, r.errors) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(r.converged());

    CHECK_THROWS(fundamental_lemma_check(one, p, 0, 0.5, 0.5, 4));
    CHECK_THROWS(fundamental_lemma_check(one, p, 0, 0.1, 0.9, 4));
}

TEST_CASE("fitted order of a power law") {
    const std::vector<double> h{1.0, 0.5, 0.25, 0.125}, e{3.0, 0.75, 0.1875, 0.046875};
    CHECK(fitted_order(h, e) == doctest::Approx(2.0));
}
