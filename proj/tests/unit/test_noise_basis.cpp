#include "saltlab/noise_basis.hpp"

#include <doctest.h>

#include <cmath>

using namespace saltlab;

TEST_CASE("first mode is the (1,0) cosine") {
    const Grid2D g(16, 16);
    const auto b = make_fourier_basis(g, 1, 2.0, 0.1, 4);
    REQUIRE(b.size() == 1);
    const auto& m = b.modes()[0];
    CHECK(m.kx == 1);
    CHECK(m.ky == 0);
    CHECK(m.phase == NoisePhase::Cos);
    const auto expected = ScalarField::from_function(g, [](double x, double) { return 0.1 * std::cos(x); });
    CHECK(max_abs(b.field(0).u) < 1e-15);
    CHECK(max_abs(b.field(0).v - expected) < 1e-15);
    CHECK(max_abs(divergence(b.field(0))) < 1e-14);
}

TEST_CASE("basis ordering and amplitudes") {
    const Grid2D g(32, 32);
    const auto b = make_fourier_basis(g, 10, 2.0, 0.1, 4);
    for (std::size_t k = 1; k < b.size(); ++k) {
        const auto& p = b.modes()[k - 1];
        const auto& q = b.modes()[k];
        CHECK(p.kx * p.kx + p.ky * p.ky <= q.kx * q.kx + q.ky * q.ky);
    }
    CHECK(b.modes()[1].phase == NoisePhase::Sin);
    // K = 4: all |k| = 1, sum of squared sup norms = 4 c^2
    const auto b4 = make_fourier_basis(g, 4, 2.0, 0.1, 4);
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        sum += b4.modes()[k].sup_norm() * b4.modes()[k].sup_norm();
        const double grid_sup = std::max(max_abs(b4.field(k).u), max_abs(b4.field(k).v));
        CHECK(grid_sup == doctest::Approx(b4.modes()[k].sup_norm()).epsilon(1e-12));
    }
    CHECK(sum == doctest::Approx(0.04).epsilon(1e-14));
    // |k|^-gamma decay
    const auto big = make_fourier_basis(g, 10, 50.0, 1.0, 4);
    for (std::size_t k = 4; k < 10; ++k) CHECK(big.modes()[k].amplitude < 1e-7);
}

TEST_CASE("admissible mode count and overflow") {
    CHECK(admissible_mode_count(1) == 4);
    CHECK(admissible_mode_count(2) == 12);
    CHECK_THROWS(make_fourier_basis(Grid2D(16, 16), 5, 2.0, 0.1, 1));
}

TEST_CASE("every field and increment is divergence-free") {
    const Grid2D g(32, 32);
    const auto b = make_fourier_basis(g, 12, 1.0, 0.3, 2);
    for (std::size_t k = 0; k < b.size(); ++k) CHECK(rms(divergence(b.field(k))) < 1e-12);
    std::vector<double> dW(12);
    for (std::size_t k = 0; k < 12; ++k) dW[k] = std::sin(3.0 * double(k) + 1.0);
    const auto inc = transport_increment(b, dW);
    CHECK(rms(divergence(inc)) < 1e-12);
    const auto zero = transport_increment(b, std::vector<double>(12, 0.0));
    CHECK(max_abs(zero.u) == 0.0);
    std::vector<double> one(12, 0.0);
    one[0] = 0.7;
    const auto single = transport_increment(b, one);
    CHECK(max_abs(single.v - 0.7 * b.field(0).v) < 1e-15);
    CHECK_THROWS(transport_increment(b, std::vector<double>(3)));
    const auto at = b.evaluate(0.3, 1.1, dW);
    CHECK(at[0] == doctest::Approx(interpolate(inc.u, 0.3, 1.1)).epsilon(1e-12));
}

TEST_CASE("uniform modes and phase names") {
    NoiseMode m;
    m.phase = NoisePhase::Uniform;
    m.ux = 0.5;
    m.uy = -0.25;
    const NoiseBasis b(Grid2D(8, 8), {m});
    CHECK(max_abs(b.field(0).u - ScalarField(b.grid(), 0.5)) == 0.0);
    CHECK(max_abs(b.dx(0).u) == 0.0);
    CHECK(phase_from_string("const") == NoisePhase::Uniform);
    CHECK(to_string(NoisePhase::Sin) == "sin");
    CHECK_THROWS(phase_from_string("tan"));
}
