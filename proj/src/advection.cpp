#include "saltlab/advection.hpp"

#include "saltlab/rng.hpp"
#include "saltlab/stratonovich.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace saltlab {

ParticleSet::ParticleSet(std::vector<Point2> start) : initial(start), positions(std::move(start)) {
    for (auto& p : positions) p = {wrap_periodic(p[0]), wrap_periodic(p[1])};
    initial = positions;
}

ParticleSet random_particles(std::size_t n, std::uint64_t seed) {
    std::vector<Point2> pts(n);
    const double L = 2.0 * std::numbers::pi;
    for (std::size_t p = 0; p < n; ++p)
        pts[p] = {L * CounterNormal::uniform(seed, stream_tag::particles, 2 * p),
                  L * CounterNormal::uniform(seed, stream_tag::particles, 2 * p + 1)};
    return ParticleSet(std::move(pts));
}

namespace {

struct VelocityInterp {
    SpectralInterpolator u, v;
    explicit VelocityInterp(const VectorField2D& f) : u(f.u), v(f.v) {}
    Point2 operator()(const Point2& x) const { return {u(x[0], x[1]), v(x[0], x[1])}; }
};

bool finite(const ScalarField& f) {
    for (double v : f.values())
        if (!std::isfinite(v)) return false;
    return true;
}

template <class Rhs>
ScalarField heun_time_dependent(const ScalarField& a, const VectorField2D& u_n, const VectorField2D& u_np1,
                                const NoiseBasis& basis, std::span<const double> dS, Rhs&& rhs) {
    if (dS.size() != basis.size() + 1) throw std::invalid_argument("increment count does not match noise basis");
    const VectorField2D zeta = basis.size() ? transport_increment(basis, dS.subspan(1)) : VectorField2D(a.grid());
    auto dx_of = [&](const VectorField2D& u) {
        VectorField2D dx = zeta;
        dx.axpy(dS[0], u);
        return dx;
    };
    const auto dx0 = dx_of(u_n);
    const auto dx1 = dx_of(u_np1);
    const ScalarField f0 = rhs(a, dx0);
    ScalarField pred = a;
    pred += f0;
    ScalarField out = a;
    out.axpy(0.5, f0);
    out.axpy(0.5, rhs(pred, dx1));
    if (!finite(out)) throw SolverAbort(0, "non-finite advected field");
    return out;
}

// -dealias(dx . grad a)
ScalarField transport_rhs(const ScalarField& a, const VectorField2D& dx) {
    const auto s = forward(a);
    const auto ax = inverse(derivative(s, Axis::X, 1));
    const auto ay = inverse(derivative(s, Axis::Y, 1));
    ScalarField adv(a.grid());
    for (std::size_t n = 0; n < adv.size(); ++n) adv[n] = -(dx.u[n] * ax[n] + dx.v[n] * ay[n]);
    return dealias(adv);
}

// -dealias(div(D dx)), zero mode exactly zero
ScalarField flux_rhs(const ScalarField& D, const VectorField2D& dx) {
    const auto& g = D.grid();
    const auto fx = dealias(forward(multiply(D, dx.u)));
    const auto fy = dealias(forward(multiply(D, dx.v)));
    Spectrum out(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) {
            const double kx = (i == g.nx() / 2) ? 0.0 : double(g.kx(i));
            const double ky = (j == g.ny() / 2) ? 0.0 : double(g.ky(j));
            out(i, j) = -std::complex<double>(0.0, 1.0) * (kx * fx(i, j) + ky * fy(i, j));
        }
    out(0, 0) = 0.0;
    return inverse(out);
}

template <class Step>
std::vector<ScalarField> advect_series(const ScalarField& a0, const VelocitySeries& u, const NoiseBasis& basis,
                                       const DrivingPath& path, std::size_t stride, Step&& step) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (path.n_noise() != basis.size()) throw std::invalid_argument("path and noise basis sizes differ");
    const std::size_t N = path.grid().n_steps();
    if (!u.steady() && u.frames() < N + 1) throw std::invalid_argument("velocity series shorter than path");
    std::vector<ScalarField> out{a0};
    ScalarField a = a0;
    for (std::size_t n = 0; n < N; ++n) {
        const auto dS = path.increments(n);
        a = step(a, u.at(n), u.at(n + 1), basis, dS);
        if ((n + 1) % stride == 0 || n + 1 == N) out.push_back(a);
    }
    return out;
}

void particle_heun(std::vector<Point2>& positions, const VelocityInterp& cur, const VelocityInterp& nxt,
                   const NoiseBasis& basis, std::span<const double> dS, std::size_t step) {
    const auto dW = dS.subspan(1);
    const double dt = dS[0];
    for (auto& x : positions) {
        const Point2 v0 = cur(x);
        const auto z0 = basis.evaluate(x[0], x[1], dW);
        const Point2 pred{x[0] + v0[0] * dt + z0[0], x[1] + v0[1] * dt + z0[1]};
        const Point2 v1 = nxt(pred);
        const auto z1 = basis.evaluate(pred[0], pred[1], dW);
        const double px = x[0] + 0.5 * (v0[0] + v1[0]) * dt + 0.5 * (z0[0] + z1[0]);
        const double py = x[1] + 0.5 * (v0[1] + v1[1]) * dt + 0.5 * (z0[1] + z1[1]);
        if (!std::isfinite(px) || !std::isfinite(py)) throw SolverAbort(step, "non-finite particle position");
        x = {wrap_periodic(px), wrap_periodic(py)};
    }
}

}  // namespace

ParticleSet advance_particles_step(const ParticleSet& particles, const VectorField2D& u_n,
                                   const VectorField2D& u_np1, const NoiseBasis& basis, std::span<const double> dS) {
    if (dS.size() != basis.size() + 1) throw std::invalid_argument("increment count does not match noise basis");
    ParticleSet out = particles;
    const VelocityInterp cur(u_n), nxt(u_np1);
    particle_heun(out.positions, cur, nxt, basis, dS, 0);
    return out;
}

ParticleSet advance_particles(const ParticleSet& particles, const VelocitySeries& u, const NoiseBasis& basis,
                              const DrivingPath& path, std::size_t n0, std::size_t n1) {
    if (n1 < n0 || n1 > path.grid().n_steps()) throw std::invalid_argument("bad particle step range");
    if (path.n_noise() != basis.size()) throw std::invalid_argument("path and noise basis sizes differ");
    ParticleSet out = particles;
    if (n0 == n1) return out;
    std::optional<VelocityInterp> cur(std::in_place, u.at(n0));
    std::optional<VelocityInterp> nxt;
    if (u.steady()) nxt.emplace(u.at(n0));
    for (std::size_t n = n0; n < n1; ++n) {
        if (!u.steady()) nxt.emplace(u.at(n + 1));
        const auto dS = path.increments(n);
        particle_heun(out.positions, *cur, *nxt, basis, dS, n + 1);
        if (!u.steady()) cur.emplace(std::move(*nxt));
    }
    return out;
}

ScalarField advect_scalar_step(const ScalarField& a, const VectorField2D& u_n, const VectorField2D& u_np1,
                               const NoiseBasis& basis, std::span<const double> dS) {
    return heun_time_dependent(a, u_n, u_np1, basis, dS, transport_rhs);
}

ScalarField advect_density_step(const ScalarField& D, const VectorField2D& u_n, const VectorField2D& u_np1,
                                const NoiseBasis& basis, std::span<const double> dS) {
    return heun_time_dependent(D, u_n, u_np1, basis, dS, flux_rhs);
}

std::vector<ScalarField> advect_scalar(const ScalarField& a0, const VelocitySeries& u, const NoiseBasis& basis,
                                       const DrivingPath& path, std::size_t stride) {
    return advect_series(a0, u, basis, path, stride, advect_scalar_step);
}

std::vector<ScalarField> advect_density(const ScalarField& D0, const VelocitySeries& u, const NoiseBasis& basis,
                                        const DrivingPath& path, std::size_t stride) {
    return advect_series(D0, u, basis, path, stride, advect_density_step);
}

double kiw_residual(const ScalarField& a0, const ScalarField& a, const ParticleSet& particles) {
    const SpectralInterpolator i0(a0), i1(a);
    double r = 0.0;
    for (std::size_t p = 0; p < particles.size(); ++p) {
        const auto& x0 = particles.initial[p];
        const auto& x = particles.positions[p];
        r = std::max(r, std::abs(i1(x[0], x[1]) - i0(x0[0], x0[1])));
    }
    return r;
}

std::vector<double> kiw_residual(std::span<const ScalarField> a_series, std::span<const ParticleSet> particles) {
    if (a_series.size() != particles.size()) throw std::invalid_argument("field and particle series lengths differ");
    std::vector<double> r;
    if (a_series.empty()) return r;
    for (std::size_t n = 0; n < a_series.size(); ++n) r.push_back(kiw_residual(a_series[0], a_series[n], particles[n]));
    return r;
}

}  // namespace saltlab
