#include "saltlab/advection.hpp"
#include "saltlab/initial_conditions.hpp"
#include "saltlab/stratonovich.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace saltlab;

namespace {

constexpr double kPi = std::numbers::pi;

NoiseBasis constant_xi(const Grid2D& g, double ux, double uy) {
    NoiseMode m;
    m.phase = NoisePhase::Uniform;
    m.ux = ux;
    m.uy = uy;
    return NoiseBasis(g, {m});
}

double periodic_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2 * kPi);
    return std::min(d, 2 * kPi - d);
}

ScalarField shifted(const ScalarField& f, double X, double Y) {
    Spectrum s = forward(f);
    const Grid2D& g = f.grid();
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) s(i, j) *= std::polar(1.0, -(g.kx(i) * X + g.ky(j) * Y));
    return inverse(s);
}

ScalarField smooth_scalar(const Grid2D& g, std::uint64_t seed, int kmax = 3) {
    RandomTrigField r(kmax, seed, 1.0);
    r.normalise_rms(1.0);
    return r.sample(g);
}

}  // namespace

TEST_CASE("particles at rest and under uniform drift") {
    const Grid2D g(16, 16);
    const auto path = sample_brownian(TimeGrid(0.0, kPi, 100), 0, 1);
    const auto start = random_particles(20, 3);
    const auto still = advance_particles(start, VelocitySeries(VectorField2D(g)), NoiseBasis(g, {}), path, 0, 100);
    for (std::size_t p = 0; p < 20; ++p) CHECK(still.positions[p] == start.positions[p]);

    const VectorField2D east(ScalarField(g, 1.0), ScalarField(g, 0.0));
    const auto moved = advance_particles(start, VelocitySeries(east), NoiseBasis(g, {}), path, 0, 100);
    for (std::size_t p = 0; p < 20; ++p) {
        CHECK(periodic_distance(moved.positions[p][0], start.positions[p][0] + kPi) < 1e-12);
        CHECK(moved.positions[p][1] == doctest::Approx(start.positions[p][1]).epsilon(1e-12));
        CHECK(moved.positions[p][0] >= 0.0);
        CHECK(moved.positions[p][0] < 2 * kPi);
    }
}

TEST_CASE("constant xi displaces particles by xi W_T") {
    const Grid2D g(16, 16);
    const auto path = sample_brownian(TimeGrid(0.0, 1.0, 200), 1, 5);
    const auto start = random_particles(10, 4);
    const auto end = advance_particles(start, VelocitySeries(VectorField2D(g)), constant_xi(g, 0.7, 0.0), path, 0, 200);
    const double W = path.value(1, 200);
    for (std::size_t p = 0; p < 10; ++p) {
        CHECK(periodic_distance(end.positions[p][0], start.positions[p][0] + 0.7 * W) < 1e-12);
        CHECK(end.positions[p][1] == start.positions[p][1]);
    }
}

TEST_CASE("scalar advection by a constant xi is a shift") {
    const Grid2D g(64, 64);
    const double ux = 0.2, uy = 0.0;
    const auto basis = constant_xi(g, ux, uy);
    const auto path = sample_brownian(TimeGrid(0.0, 0.5, 500), 1, 6);
    const auto a0 = smooth_scalar(g, 7, 2);
    const auto series = advect_scalar(a0, VelocitySeries(VectorField2D(g)), basis, path, 500);
    REQUIRE(series.size() == 2);
    const double W = path.value(1, 500);
    CHECK(max_abs(series.back() - shifted(a0, ux * W, uy * W)) < 1e-5);

    ParticleSet ps = random_particles(50, 8);
    ps = advance_particles(ps, VelocitySeries(VectorField2D(g)), basis, path, 0, 500);
    CHECK(kiw_residual(a0, series.back(), ps) < 1e-5);
}

TEST_CASE("constants and shifts") {
    const Grid2D g(32, 32);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.2, 4);
    const auto path = sample_brownian(TimeGrid(0.0, 0.1, 50), 4, 9);
    RandomTrigField psi(3, 10, 2.0);
    psi.normalise_velocity_rms(1.0);
    const VelocitySeries u(psi.perp_gradient(g));
    const auto c = advect_scalar(ScalarField(g, 2.5), u, basis, path, 50).back();
    CHECK(max_abs(c - ScalarField(g, 2.5)) < 1e-13);
    const auto a0 = smooth_scalar(g, 11);
    const auto a = advect_scalar(a0, u, basis, path, 50).back();
    const auto b = advect_scalar(a0 + ScalarField(g, 1.0), u, basis, path, 50).back();
    CHECK(max_abs(b - a - ScalarField(g, 1.0)) < 1e-13);
    std::vector<ParticleSet> parts{random_particles(5, 1), random_particles(5, 1)};
    const std::vector<ScalarField> consts{ScalarField(g, 1.0), ScalarField(g, 1.0)};
    for (double r : kiw_residual(consts, parts)) CHECK(r < 1e-14);
}

TEST_CASE("range bound") {
    const Grid2D g(64, 64);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.1, 4);
    const auto path = sample_brownian(TimeGrid(0.0, 0.5, 500), 4, 12);
    RandomTrigField psi(4, 13, 2.0);
    psi.normalise_velocity_rms(1.0);
    const auto a0 = smooth_scalar(g, 14);
    const auto a = advect_scalar(a0, VelocitySeries(psi.perp_gradient(g)), basis, path, 500).back();
    // range of the continuous a0, not just its grid samples
    const auto fine = smooth_scalar(Grid2D(512, 512), 14);
    CHECK(max_value(a) <= max_value(fine) + 1e-3);
    CHECK(min_value(a) >= min_value(fine) - 1e-3);
}

TEST_CASE("density advection") {
    const Grid2D g(32, 32);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.2, 4);
    RandomTrigField psi(3, 15, 2.0);
    psi.normalise_velocity_rms(1.0);
    const VelocitySeries u(psi.perp_gradient(g));
    const auto path = sample_brownian(TimeGrid(0.0, 1.0, 1000), 4, 16);

    const auto one = advect_density(ScalarField(g, 1.0), u, basis, path, 1000).back();
    CHECK(max_abs(one - ScalarField(g, 1.0)) < 1e-10);

    ScalarField D0 = smooth_scalar(g, 17);
    for (auto& v : D0.values()) v += 4.0;
    const auto D = advect_density(D0, u, basis, path, 1000).back();
    CHECK(std::abs(integral(D) - integral(D0)) / integral(D0) < 1e-11);
}

TEST_CASE("compressible drift matches a deterministic flux-form reference") {
    const Grid2D g(32, 32);
    const auto phi = ScalarField::from_function(g, [](double x, double y) { return 0.3 * std::sin(x) * std::cos(2 * y); });
    const VectorField2D u = gradient(phi);
    ScalarField D0 = smooth_scalar(g, 18, 2);
    for (auto& v : D0.values()) v += 3.0;
    const double dt = 1e-3;
    const auto path = sample_brownian(TimeGrid(0.0, 0.1, 100), 0, 1);
    const auto D = advect_density(D0, VelocitySeries(u), NoiseBasis(g, {}), path, 100).back();

    auto rhs = [&](const ScalarField& d) {
        const VectorField2D flux(dealias(multiply(d, u.u)), dealias(multiply(d, u.v)));
        return -1.0 * divergence(flux);
    };
    ScalarField ref = D0;
    for (int n = 0; n < 100; ++n) {
        const auto k1 = rhs(ref);
        const auto k2 = rhs(ref + dt * k1);
        ref = ref + 0.5 * dt * (k1 + k2);
    }
    CHECK(max_abs(D - ref) < 1e-12);
    CHECK(max_abs(D - D0) > 1e-3);
}
