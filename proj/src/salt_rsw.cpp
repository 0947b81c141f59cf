#include "saltlab/salt_rsw.hpp"

#include "saltlab/stratonovich.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saltlab {

namespace {

struct RswVars {
    VectorField2D u;
    ScalarField eta;

    RswVars& operator+=(const RswVars& o) {
        u += o.u;
        eta += o.eta;
        return *this;
    }
    RswVars& axpy(double s, const RswVars& o) {
        u.axpy(s, o.u);
        eta.axpy(s, o.eta);
        return *this;
    }
};

RswVars rsw_increment(const RswVars& x, const RswParams& p, const NoiseBasis& basis, std::span<const double> dS) {
    const auto& g = x.eta.grid();
    const double dt = dS[0];
    const double eps = p.epsilon;
    const bool noisy = basis.size() > 0;
    const VectorField2D zeta = noisy ? transport_increment(basis, dS.subspan(1)) : VectorField2D(g);

    const auto vort = curl(x.u);
    ScalarField fx(g), fy(g), bern(g), flux_x(g), flux_y(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double dx = x.u.u[n] * dt + zeta.u[n];
        const double dy = x.u.v[n] * dt + zeta.v[n];
        const double q = eps * vort[n] + p.f[n];
        // dx_t x (q z_hat) = (dy q, -dx q)
        fx[n] = dy * q;
        fy[n] = -dx * q;
        const double ke = 0.5 * eps * (x.u.u[n] * x.u.u[n] + x.u.v[n] * x.u.v[n]);
        const double k = (x.eta[n] - p.b[n]) / (eps * p.froude);
        double s = (ke + k) * dt;
        if (noisy) s += zeta.u[n] * (eps * x.u.u[n] + p.R.u[n]) + zeta.v[n] * (eps * x.u.v[n] + p.R.v[n]);
        bern[n] = s;
        flux_x[n] = x.eta[n] * dx;
        flux_y[n] = x.eta[n] * dy;
    }

    auto su = dealias(forward(fx));
    auto sv = dealias(forward(fy));
    const auto sb = dealias(forward(bern));
    const auto sfx = dealias(forward(flux_x));
    const auto sfy = dealias(forward(flux_y));
    Spectrum se(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j) {
            const double kx = (i == g.nx() / 2) ? 0.0 : double(g.kx(i));
            const double ky = (j == g.ny() / 2) ? 0.0 : double(g.ky(j));
            const std::complex<double> ikx(0.0, kx), iky(0.0, ky);
            su(i, j) = (su(i, j) - ikx * sb(i, j)) / eps;
            sv(i, j) = (sv(i, j) - iky * sb(i, j)) / eps;
            se(i, j) = -(ikx * sfx(i, j) + iky * sfy(i, j));
        }
    se(0, 0) = 0.0;  // flux form: total depth is untouched
    return {{inverse(su), inverse(sv)}, inverse(se)};
}

}  // namespace

RswParams make_rsw_params(double epsilon, double froude, ScalarField f, ScalarField b) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(froude > 0.0)) throw std::invalid_argument("froude must be > 0");
    if (!(f.grid() == b.grid())) throw std::invalid_argument("f and b must share a grid");
    RswParams p;
    p.epsilon = epsilon;
    p.froude = froude;
    p.R = perp_gradient(inverse_laplacian(f));
    p.f = std::move(f);
    p.b = std::move(b);
    return p;
}

RswState step_rsw(const RswState& state, const RswParams& params, const NoiseBasis& basis,
                  std::span<const double> dS, std::size_t corrector_iterations) {
    if (dS.size() != basis.size() + 1) throw std::invalid_argument("increment count does not match noise basis");
    RswVars x{state.u, state.eta};
    auto next = heun(x, [&](const RswVars& y) { return rsw_increment(y, params, basis, dS); }, corrector_iterations);
    const std::size_t step = state.step + 1;
    for (std::size_t n = 0; n < next.eta.size(); ++n) {
        if (!std::isfinite(next.eta[n]) || !std::isfinite(next.u.u[n]) || !std::isfinite(next.u.v[n]))
            throw SolverAbort(step, "non-finite shallow-water state");
        if (next.eta[n] <= 0.0) throw SolverAbort(step, "depth became non-positive");
    }
    RswState out;
    out.time = state.time + dS[0];
    out.step = step;
    out.u = std::move(next.u);
    out.eta = std::move(next.eta);
    return out;
}

RswState step_rsw_deterministic(const RswState& state, const RswParams& params, double dt) {
    const NoiseBasis none(state.eta.grid(), {});
    const double dS[1] = {dt};
    return step_rsw(state, params, none, dS);
}

ScalarField potential_vorticity(const RswState& state, const RswParams& params) {
    const auto zeta = curl(state.u);
    ScalarField q(state.eta.grid());
    for (std::size_t n = 0; n < q.size(); ++n) q[n] = (params.epsilon * zeta[n] + params.f[n]) / state.eta[n];
    return q;
}

DiagnosticsRecord rsw_diagnostics(const RswState& state, const RswParams& params) {
    DiagnosticsRecord rec;
    rec.step = state.step;
    rec.time = state.time;
    const double area = state.eta.grid().cell_area();
    const double eps = params.epsilon;
    double energy = 0.0;
    for (std::size_t n = 0; n < state.eta.size(); ++n) {
        const double u2 = state.u.u[n] * state.u.u[n] + state.u.v[n] * state.u.v[n];
        const double h = state.eta[n] - params.b[n];
        energy += 0.5 * eps * state.eta[n] * u2 + h * h / (2.0 * eps * params.froude);
    }
    const auto q = potential_vorticity(state, params);
    rec.set("mass", integral(state.eta));
    rec.set("energy", energy * area);
    rec.set("pv_min", min_value(q));
    rec.set("pv_max", max_value(q));
    rec.set("eta_min", min_value(state.eta));
    return rec;
}

}  // namespace saltlab
