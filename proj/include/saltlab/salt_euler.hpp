#pragma once

#include "saltlab/diagnostics.hpp"
#include "saltlab/fields.hpp"
#include "saltlab/noise_basis.hpp"

#include <array>
#include <span>
#include <vector>

namespace saltlab {

enum class Formulation { Vorticity, Velocity };

/// Prognostic state of incompressible SALT Euler on the 2-torus.
///
/// The vorticity form carries omega plus the domain-mean velocity, which the
/// Biot-Savart inversion cannot recover on a periodic domain but which the
/// noise terms can change.
struct EulerState {
    Formulation form = Formulation::Vorticity;
    double time = 0.0;
    std::size_t step = 0;
    ScalarField omega;
    std::array<double, 2> mean_flow{0.0, 0.0};
    VectorField2D u;
    // Pressure split dp = P0 dt + sum_k Pk o dW_k at the current state.
    ScalarField p0;
    std::vector<ScalarField> pk;
};

struct EulerOptions {
    /// false applies pressure to the dt channel only (P0-only pressure).
    bool project_noise_channels = true;
    /// Evaluate pressure_components after each step.
    bool store_pressure = true;
    std::size_t corrector_iterations = 1;
};

/// RMS divergence of each channel tendency (index 0 = dt channel), maximum
/// over the Heun stages of one step.
struct ChannelDivergence {
    std::vector<double> rms;
};

EulerState make_vorticity_state(ScalarField omega, double time = 0.0);
EulerState make_velocity_state(VectorField2D u, double time = 0.0);

/// Velocity of the state (mean flow + Biot-Savart for the vorticity form).
VectorField2D velocity(const EulerState& s);
ScalarField vorticity(const EulerState& s);

/// One stochastic Heun step of d omega + dx_t . grad omega = 0 with
/// dx_t = u dt + sum_k xi_k o dW_k. dS[0] = dt, dS[1..K] noise increments.
EulerState step_vorticity(const EulerState& state, const NoiseBasis& basis, std::span<const double> dS,
                          const EulerOptions& opts = {});

/// One stochastic Heun step of the velocity equation
///   du + u.grad u dt + sum_k (xi_k.grad u + sum_j u_j grad xi_k^j) o dW_k + grad dp = 0
/// with the pressure gradient applied channel by channel (Leray projection of
/// each channel tendency).
EulerState step_velocity(const EulerState& state, const NoiseBasis& basis, std::span<const double> dS,
                         const EulerOptions& opts = {}, ChannelDivergence* divergence = nullptr);

/// Deterministic Euler through the same kernel with no noise channels.
EulerState step_deterministic(const EulerState& state, double dt, const EulerOptions& opts = {});

/// Unprojected channel tendencies: index 0 is -u.grad u, index k is
/// -(xi_k.grad u + sum_j u_j grad xi_k^j).
std::vector<VectorField2D> channel_tendencies(const VectorField2D& u, const NoiseBasis& basis);

struct PressureComponents {
    ScalarField p0;
    std::vector<ScalarField> pk;
};

/// Pressure channels from the explicit Poisson equations
///   lap P0 = -sum_ij d_j u_i d_i u_j
///   lap Pk = -(lap xi_k).u - sum_ij (d_j xi_k^i d_j u_i + d_j xi_k^i d_i u_j)
/// in the zero-mean gauge.
PressureComponents pressure_components(const VectorField2D& u, const NoiseBasis& basis);

/// energy, enstrophy, casimir4, div_rms, div_max, p0_norm, pk_norm_total
DiagnosticsRecord euler_diagnostics(const EulerState& state);

/// Advective Courant estimate max|u| dt + max_k |xi_k| median|dW|, in units of the grid spacing.
double advisory_courant(const EulerState& state, const NoiseBasis& basis, double dt);

}  // namespace saltlab
