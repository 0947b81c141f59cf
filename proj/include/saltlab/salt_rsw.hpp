#pragma once

#include "saltlab/diagnostics.hpp"
#include "saltlab/fields.hpp"
#include "saltlab/noise_basis.hpp"

#include <span>

namespace saltlab {

struct RswState {
    double time = 0.0;
    std::size_t step = 0;
    VectorField2D u;
    ScalarField eta;  // total depth
};

/// Rotating shallow-water parameters. R is the periodic vector potential of
/// the Coriolis field: curl R = f - mean(f). The mean of f enters only through
/// the absolute vorticity eps*curl(u) + f.
struct RswParams {
    double epsilon = 0.1;
    double froude = 1.0;
    ScalarField f;
    ScalarField b;
    VectorField2D R;
};

RswParams make_rsw_params(double epsilon, double froude, ScalarField f, ScalarField b);

/// One stochastic Heun step of
///   eps du - dx_t x curl(eps u + R) + sum_i grad(xi_i o dW_i . (eps u + R)) = -grad(eps/2 |u|^2 + k) dt
///   d eta + div(eta dx_t) = 0,  k = (eta - b) / (eps F)
/// with dx_t = u dt + sum_i xi_i o dW_i. The depth update is in flux form.
RswState step_rsw(const RswState& state, const RswParams& params, const NoiseBasis& basis,
                  std::span<const double> dS, std::size_t corrector_iterations = 1);

/// Deterministic rotating shallow water through the same kernel (no noise channels).
RswState step_rsw_deterministic(const RswState& state, const RswParams& params, double dt);

/// q = (eps curl u + f) / eta
ScalarField potential_vorticity(const RswState& state, const RswParams& params);

/// mass, energy, pv_min, pv_max, eta_min
DiagnosticsRecord rsw_diagnostics(const RswState& state, const RswParams& params);

}  // namespace saltlab
