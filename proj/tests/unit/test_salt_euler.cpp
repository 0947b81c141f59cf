#include "saltlab/initial_conditions.hpp"
#include "saltlab/paths.hpp"
#include "saltlab/salt_euler.hpp"
#include "saltlab/stratonovich.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace saltlab;

namespace {

constexpr double kPi = std::numbers::pi;

EulerOptions no_pressure() {
    EulerOptions o;
    o.store_pressure = false;
    return o;
}

VectorField2D random_velocity(const Grid2D& g, std::uint64_t seed, double rms_u = 1.0) {
    RandomTrigField psi(4, seed, 2.0);
    psi.normalise_velocity_rms(rms_u);
    return psi.perp_gradient(g);
}

}  // namespace

TEST_CASE("Taylor-Green is steady in velocity form") {
    const Grid2D g(64, 64);
    EulerState s = make_velocity_state(taylor_green_velocity(g));
    const auto u0 = s.u;
    for (int n = 0; n < 1000; ++n) s = step_deterministic(s, 1e-3, no_pressure());
    CHECK(max_abs(s.u.u - u0.u) < 1e-6);
    CHECK(max_abs(s.u.v - u0.v) < 1e-6);
    CHECK(s.time == doctest::Approx(1.0));
    CHECK(s.step == 1000);
}

TEST_CASE("zero vorticity stays zero under noise") {
    const Grid2D g(32, 32);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.5, 4);
    const auto path = sample_brownian(TimeGrid(0.0, 0.1, 50), 4, 3);
    EulerState s = make_vorticity_state(ScalarField(g));
    for (std::size_t n = 0; n < 50; ++n) s = step_vorticity(s, basis, path.increments(n), no_pressure());
    CHECK(max_abs(s.omega) == 0.0);
}

TEST_CASE("mean vorticity is conserved exactly") {
    const Grid2D g(32, 32);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.1, 4);
    RandomTrigField psi(4, 8, 2.0);
    ScalarField w0 = psi.laplacian(g);
    for (auto& v : w0.values()) v += 0.3;
    const auto path = sample_brownian(TimeGrid(0.0, 0.05, 50), 4, 4);
    EulerState s = make_vorticity_state(w0);
    for (std::size_t n = 0; n < 50; ++n) s = step_vorticity(s, basis, path.increments(n), no_pressure());
    CHECK(mean(s.omega) == doctest::Approx(mean(w0)).epsilon(1e-14));
}

TEST_CASE("vorticity and velocity forms agree on one path (K = 2)") {
    const Grid2D g(64, 64);
    const auto basis = make_fourier_basis(g, 2, 2.0, 0.1, 4);
    const auto path = sample_brownian(TimeGrid(0.0, 0.25, 500), 2, 12);
    RandomTrigField psi(4, 13, 2.0);
    psi.normalise_velocity_rms(1.0);
    EulerState w = make_vorticity_state(psi.laplacian(g));
    EulerState v = make_velocity_state(psi.perp_gradient(g));
    for (std::size_t n = 0; n < 500; ++n) {
        w = step_vorticity(w, basis, path.increments(n), no_pressure());
        v = step_velocity(v, basis, path.increments(n), no_pressure());
    }
    CHECK(l2_norm(vorticity(v) - w.omega) / l2_norm(w.omega) < 1e-3);
    // the mean flow picked up from the noise is carried by both forms
    CHECK(mean(v.u.u) == doctest::Approx(w.mean_flow[0]).epsilon(1e-8));
}

TEST_CASE("projected channel tendencies are divergence-free, raw ones are not") {
    const Grid2D g(32, 32);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.1, 4);
    EulerState s = make_velocity_state(random_velocity(g, 3));
    const std::vector<double> dS{1e-3, 0.02, -0.03, 0.01, 0.015};
    ChannelDivergence cd;
    s = step_velocity(s, basis, dS, no_pressure(), &cd);
    REQUIRE(cd.rms.size() == 5);
    for (double d : cd.rms) CHECK(d < 1e-10);
    CHECK(rms(divergence(s.u)) < 1e-10);
    auto opts = no_pressure();
    opts.project_noise_channels = false;
    ChannelDivergence raw;
    step_velocity(s, basis, dS, opts, &raw);
    CHECK(raw.rms[0] < 1e-10);
    for (std::size_t k = 1; k < 5; ++k) CHECK(raw.rms[k] > 1e-3);
}

TEST_CASE("pressure components") {
    const Grid2D g(32, 32);
    const auto zero = pressure_components(VectorField2D(g), make_fourier_basis(g, 3, 2.0, 0.1, 4));
    CHECK(max_abs(zero.p0) == 0.0);
    for (const auto& p : zero.pk) CHECK(max_abs(p) == 0.0);

    const auto tg = pressure_components(taylor_green_velocity(g), NoiseBasis(g, {}));
    const auto expected = ScalarField::from_function(g, [](double x, double y) {
        return 0.25 * (std::cos(2 * x) + std::cos(2 * y));
    });
    CHECK(max_abs(tg.p0 - expected) < 1e-13);
    CHECK(tg.pk.empty());

    NoiseMode c;
    c.phase = NoisePhase::Uniform;
    c.ux = 1.0;
    const auto pc = pressure_components(random_velocity(g, 5), NoiseBasis(g, {c}));
    CHECK(max_abs(pc.pk.at(0)) < 1e-12);
}

TEST_CASE("Pk from the explicit formula equals the Poisson solve of each channel") {
    const Grid2D g(64, 64);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.1, 4);
    const auto u = random_velocity(g, 9);
    const auto pc = pressure_components(u, basis);
    const auto raw = channel_tendencies(u, basis);
    for (std::size_t k = 0; k < 4; ++k) {
        const auto oracle = inverse_laplacian(divergence(raw[k + 1]));
        CHECK(l2_norm(pc.pk[k] - oracle) / l2_norm(oracle) < 1e-10);
    }
    const auto oracle0 = inverse_laplacian(divergence(raw[0]));
    CHECK(l2_norm(pc.p0 - oracle0) / l2_norm(oracle0) < 1e-10);
}

TEST_CASE("diagnostics") {
    const auto zero = euler_diagnostics(make_vorticity_state(ScalarField(Grid2D(16, 16))));
    for (const auto& [name, v] : zero.metrics) CHECK(v == 0.0);

    const auto tg = euler_diagnostics(make_vorticity_state(taylor_green_vorticity(Grid2D(32, 32))));
    CHECK(tg.get("enstrophy") == doctest::Approx(2 * kPi * kPi).epsilon(1e-13));
    CHECK(tg.get("energy") == doctest::Approx(kPi * kPi).epsilon(1e-13));
    // int (2 sin x sin y)^4 = 16 (3 pi / 4)^2
    CHECK(tg.get("casimir4") == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-13));

    RandomTrigField psi(3, 2, 2.0);
    const auto a = euler_diagnostics(make_vorticity_state(psi.laplacian(Grid2D(32, 32))));
    const auto b = euler_diagnostics(make_vorticity_state(psi.laplacian(Grid2D(64, 64))));
    for (const char* k : {"energy", "enstrophy", "casimir4"}) CHECK(a.get(k) == doctest::Approx(b.get(k)).epsilon(1e-12));
}

TEST_CASE("enstrophy drift shrinks with dt") {
    const Grid2D g(32, 32);
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.5, 4);
    auto path = sample_brownian(TimeGrid(0.0, 0.25, 125), 4, 6);
    RandomTrigField psi(4, 1, 2.0);
    psi.normalise_velocity_rms(1.0);
    std::vector<double> drift;
    for (int l = 0; l < 2; ++l) {
        if (l) path = refine(path, 2, 99);
        EulerState s = make_vorticity_state(psi.laplacian(g));
        const double z0 = euler_diagnostics(s).get("enstrophy");
        for (std::size_t n = 0; n < path.grid().n_steps(); ++n) s = step_vorticity(s, basis, path.increments(n), no_pressure());
        drift.push_back(std::abs(euler_diagnostics(s).get("enstrophy") - z0) / z0);
    }
    CHECK(drift[1] < drift[0]);
}

TEST_CASE("blow-up aborts with the step index") {
    const Grid2D g(16, 16);
    EulerState s = make_vorticity_state(taylor_green_vorticity(g));
    s.omega[3] = NAN;
    CHECK_THROWS_AS(step_vorticity(s, NoiseBasis(g, {}), std::vector<double>{1e-3}), SolverAbort);
}

TEST_CASE("advisory Courant number") {
    const Grid2D g(32, 32);
    const auto s = make_velocity_state(taylor_green_velocity(g, 2.0));
    const double c = advisory_courant(s, NoiseBasis(g, {}), 0.01);
    CHECK(c == doctest::Approx(2.0 * 0.01 / g.hx()).epsilon(1e-12));
}
