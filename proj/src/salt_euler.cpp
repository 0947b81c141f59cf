#include "saltlab/salt_euler.hpp"

#include "saltlab/stratonovich.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saltlab {

namespace {

// Heun state for the vorticity form.
struct VorticityVars {
    ScalarField omega;
    std::array<double, 2> mean{0.0, 0.0};

    VorticityVars& operator+=(const VorticityVars& o) {
        omega += o.omega;
        mean[0] += o.mean[0];
        mean[1] += o.mean[1];
        return *this;
    }
    VorticityVars& axpy(double s, const VorticityVars& o) {
        omega.axpy(s, o.omega);
        mean[0] += s * o.mean[0];
        mean[1] += s * o.mean[1];
        return *this;
    }
};

bool finite(const ScalarField& f) {
    return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

void check_increments(const NoiseBasis& basis, std::span<const double> dS) {
    if (dS.size() != basis.size() + 1)
        throw std::invalid_argument("expected " + std::to_string(basis.size() + 1) + " increments, got " +
                                    std::to_string(dS.size()));
}

/// Dealiased copy of f with the mean mode removed.
ScalarField dealias_zero_mean(const ScalarField& f) {
    auto s = dealias(forward(f));
    s(0, 0) = 0.0;
    return inverse(s);
}

/// Dealias and (optionally) Leray-project a vector field in one spectral pass.
VectorField2D dealias_project(const VectorField2D& w, bool project) {
    const auto& g = w.grid();
    auto su = dealias(forward(w.u));
    auto sv = dealias(forward(w.v));
    if (project) {
        for (std::size_t i = 0; i < g.nx(); ++i)
            for (std::size_t j = 0; j < g.nky(); ++j) {
                const double kx = (i == g.nx() / 2) ? 0.0 : double(g.kx(i));
                const double ky = (j == g.ny() / 2) ? 0.0 : double(g.ky(j));
                const double k2 = kx * kx + ky * ky;
                if (k2 == 0.0) continue;
                const auto kdotv = kx * su(i, j) + ky * sv(i, j);
                su(i, j) -= kx * kdotv / k2;
                sv(i, j) -= ky * kdotv / k2;
            }
    }
    return {inverse(su), inverse(sv)};
}

struct VelocityGradient {
    ScalarField ux_x, ux_y, uy_x, uy_y;
};

VelocityGradient velocity_gradient(const VectorField2D& u) {
    const auto su = forward(u.u);
    const auto sv = forward(u.v);
    return {inverse(derivative(su, Axis::X, 1)), inverse(derivative(su, Axis::Y, 1)),
            inverse(derivative(sv, Axis::X, 1)), inverse(derivative(sv, Axis::Y, 1))};
}

VorticityVars vorticity_increment(const VorticityVars& x, const NoiseBasis& basis, std::span<const double> dS) {
    const auto& g = x.omega.grid();
    const double dt = dS[0];
    const auto dW = dS.subspan(1);

    const auto w_hat = forward(x.omega);
    const auto psi = inverse_laplacian(w_hat);
    auto u = inverse(derivative(psi, Axis::Y, 1));
    u *= -1.0;
    auto v = inverse(derivative(psi, Axis::X, 1));
    for (std::size_t n = 0; n < g.size(); ++n) {
        u[n] += x.mean[0];
        v[n] += x.mean[1];
    }
    const auto wx = inverse(derivative(w_hat, Axis::X, 1));
    const auto wy = inverse(derivative(w_hat, Axis::Y, 1));

    ScalarField adv(g);
    VorticityVars inc;
    if (basis.size() == 0) {
        for (std::size_t n = 0; n < g.size(); ++n) adv[n] = (u[n] * dt) * wx[n] + (v[n] * dt) * wy[n];
    } else {
        const auto zeta = transport_increment(basis, dW);
        for (std::size_t n = 0; n < g.size(); ++n)
            adv[n] = (u[n] * dt + zeta.u[n]) * wx[n] + (v[n] * dt + zeta.v[n]) * wy[n];
        // Mean flow: d<u_i> = -<sum_j u_j d_i zeta_j>.
        VectorField2D gx(g), gy(g);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (dW[k] == 0.0) continue;
            gx.axpy(dW[k], basis.dx(k));
            gy.axpy(dW[k], basis.dy(k));
        }
        double sx = 0.0, sy = 0.0;
        for (std::size_t n = 0; n < g.size(); ++n) {
            sx += u[n] * gx.u[n] + v[n] * gx.v[n];
            sy += u[n] * gy.u[n] + v[n] * gy.v[n];
        }
        inc.mean = {-sx / double(g.size()), -sy / double(g.size())};
    }
    inc.omega = dealias_zero_mean(adv);
    inc.omega *= -1.0;
    return inc;
}

void attach_pressure(EulerState& s, const NoiseBasis& basis, const EulerOptions& opts) {
    if (!opts.store_pressure) return;
    auto p = pressure_components(velocity(s), basis);
    s.p0 = std::move(p.p0);
    s.pk = std::move(p.pk);
}

}  // namespace

EulerState make_vorticity_state(ScalarField omega, double time) {
    EulerState s;
    s.form = Formulation::Vorticity;
    s.time = time;
    s.omega = std::move(omega);
    return s;
}

EulerState make_velocity_state(VectorField2D u, double time) {
    EulerState s;
    s.form = Formulation::Velocity;
    s.time = time;
    s.u = std::move(u);
    return s;
}

VectorField2D velocity(const EulerState& s) {
    if (s.form == Formulation::Velocity) return s.u;
    auto u = velocity_from_vorticity(s.omega);
    for (std::size_t n = 0; n < u.u.size(); ++n) {
        u.u[n] += s.mean_flow[0];
        u.v[n] += s.mean_flow[1];
    }
    return u;
}

ScalarField vorticity(const EulerState& s) { return s.form == Formulation::Vorticity ? s.omega : curl(s.u); }

EulerState step_vorticity(const EulerState& state, const NoiseBasis& basis, std::span<const double> dS,
                          const EulerOptions& opts) {
    if (state.form != Formulation::Vorticity) throw std::invalid_argument("step_vorticity needs a vorticity state");
    check_increments(basis, dS);
    VorticityVars x{state.omega, state.mean_flow};
    auto next = heun(x, [&](const VorticityVars& y) { return vorticity_increment(y, basis, dS); },
                     opts.corrector_iterations);
    if (!finite(next.omega) || !std::isfinite(next.mean[0]) || !std::isfinite(next.mean[1]))
        throw SolverAbort(state.step + 1, "non-finite vorticity");
    EulerState out = make_vorticity_state(std::move(next.omega), state.time + dS[0]);
    out.mean_flow = next.mean;
    out.step = state.step + 1;
    attach_pressure(out, basis, opts);
    return out;
}

std::vector<VectorField2D> channel_tendencies(const VectorField2D& u, const NoiseBasis& basis) {
    const auto& g = u.grid();
    const auto G = velocity_gradient(u);
    std::vector<VectorField2D> out;
    out.reserve(basis.size() + 1);
    VectorField2D t0(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
        t0.u[n] = -(u.u[n] * G.ux_x[n] + u.v[n] * G.ux_y[n]);
        t0.v[n] = -(u.u[n] * G.uy_x[n] + u.v[n] * G.uy_y[n]);
    }
    out.push_back(std::move(t0));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto& xi = basis.field(k);
        const auto& dx = basis.dx(k);  // (d_x xi_x, d_x xi_y)
        const auto& dy = basis.dy(k);  // (d_y xi_x, d_y xi_y)
        VectorField2D t(g);
        for (std::size_t n = 0; n < g.size(); ++n) {
            t.u[n] = -(xi.u[n] * G.ux_x[n] + xi.v[n] * G.ux_y[n] + u.u[n] * dx.u[n] + u.v[n] * dx.v[n]);
            t.v[n] = -(xi.u[n] * G.uy_x[n] + xi.v[n] * G.uy_y[n] + u.u[n] * dy.u[n] + u.v[n] * dy.v[n]);
        }
        out.push_back(std::move(t));
    }
    return out;
}

EulerState step_velocity(const EulerState& state, const NoiseBasis& basis, std::span<const double> dS,
                         const EulerOptions& opts, ChannelDivergence* divergence) {
    if (state.form != Formulation::Velocity) throw std::invalid_argument("step_velocity needs a velocity state");
    check_increments(basis, dS);
    if (divergence) divergence->rms.assign(basis.size() + 1, 0.0);

    auto increment = [&](const VectorField2D& y) {
        auto channels = channel_tendencies(y, basis);
        VectorField2D inc(y.grid());
        for (std::size_t k = 0; k < channels.size(); ++k) {
            const bool project = (k == 0) || opts.project_noise_channels;
            const auto t = dealias_project(channels[k], project);
            if (divergence) divergence->rms[k] = std::max(divergence->rms[k], rms(saltlab::divergence(t)));
            inc.axpy(dS[k], t);
        }
        return inc;
    };
    auto next = heun(state.u, increment, opts.corrector_iterations);
    if (!finite(next.u) || !finite(next.v)) throw SolverAbort(state.step + 1, "non-finite velocity");
    EulerState out = make_velocity_state(std::move(next), state.time + dS[0]);
    out.step = state.step + 1;
    attach_pressure(out, basis, opts);
    return out;
}

EulerState step_deterministic(const EulerState& state, double dt, const EulerOptions& opts) {
    const auto& g = state.form == Formulation::Vorticity ? state.omega.grid() : state.u.grid();
    const NoiseBasis none(g, {});
    const double dS[1] = {dt};
    return state.form == Formulation::Vorticity ? step_vorticity(state, none, dS, opts)
                                                : step_velocity(state, none, dS, opts);
}

PressureComponents pressure_components(const VectorField2D& u, const NoiseBasis& basis) {
    const auto& g = u.grid();
    const auto G = velocity_gradient(u);
    PressureComponents out;
    ScalarField rhs(g);
    for (std::size_t n = 0; n < g.size(); ++n)
        rhs[n] = -(G.ux_x[n] * G.ux_x[n] + 2.0 * G.ux_y[n] * G.uy_x[n] + G.uy_y[n] * G.uy_y[n]);
    out.p0 = inverse_laplacian(rhs);

    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto& xi = basis.field(k);
        // a_ij = d_j xi^i
        const auto& axx = basis.dx(k).u;
        const auto& ayx = basis.dx(k).v;
        const auto& axy = basis.dy(k).u;
        const auto& ayy = basis.dy(k).v;
        const auto lap_x = laplacian(xi.u);
        const auto lap_y = laplacian(xi.v);
        for (std::size_t n = 0; n < g.size(); ++n) {
            const double lap_dot_u = lap_x[n] * u.u[n] + lap_y[n] * u.v[n];
            // sum_ij a_ij d_j u_i
            const double same = axx[n] * G.ux_x[n] + axy[n] * G.ux_y[n] + ayx[n] * G.uy_x[n] + ayy[n] * G.uy_y[n];
            // sum_ij a_ij d_i u_j
            const double swap = axx[n] * G.ux_x[n] + axy[n] * G.uy_x[n] + ayx[n] * G.ux_y[n] + ayy[n] * G.uy_y[n];
            rhs[n] = -(lap_dot_u + same + swap);
        }
        out.pk.push_back(inverse_laplacian(rhs));
    }
    return out;
}

DiagnosticsRecord euler_diagnostics(const EulerState& state) {
    DiagnosticsRecord rec;
    rec.step = state.step;
    rec.time = state.time;
    const auto u = velocity(state);
    const auto w = vorticity(state);
    const double area = u.grid().cell_area();
    double energy = 0.0, enstrophy = 0.0, c4 = 0.0;
    for (std::size_t n = 0; n < u.u.size(); ++n) {
        energy += u.u[n] * u.u[n] + u.v[n] * u.v[n];
        enstrophy += w[n] * w[n];
        c4 += w[n] * w[n] * w[n] * w[n];
    }
    const auto div = divergence(u);
    double pk_total = 0.0;
    for (const auto& p : state.pk) pk_total += l2_norm(p);
    rec.set("energy", 0.5 * energy * area);
    rec.set("enstrophy", 0.5 * enstrophy * area);
    rec.set("casimir4", c4 * area);
    rec.set("div_rms", rms(div));
    rec.set("div_max", max_abs(div));
    rec.set("p0_norm", state.p0.size() ? l2_norm(state.p0) : 0.0);
    rec.set("pk_norm_total", pk_total);
    return rec;
}

double advisory_courant(const EulerState& state, const NoiseBasis& basis, double dt) {
    const auto u = velocity(state);
    double umax = 0.0;
    for (std::size_t n = 0; n < u.u.size(); ++n) umax = std::max(umax, std::hypot(u.u[n], u.v[n]));
    double xi_max = 0.0;
    for (const auto& m : basis.modes()) xi_max = std::max(xi_max, m.sup_norm());
    const double median_dw = 0.6744897501960817 * std::sqrt(dt);
    const double h = std::min(u.grid().hx(), u.grid().hy());
    return (umax * dt + xi_max * median_dw) / h;
}

}  // namespace saltlab
