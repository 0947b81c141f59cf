#pragma once

#include "saltlab/fields.hpp"
#include "saltlab/salt_rsw.hpp"

#include <cstdint>
#include <vector>

namespace saltlab {

/// omega = 2A sin x sin y, the vorticity of the Taylor-Green cell below.
ScalarField taylor_green_vorticity(const Grid2D& grid, double amplitude = 1.0);
/// u = A (sin x cos y, -cos x sin y)
VectorField2D taylor_green_velocity(const Grid2D& grid, double amplitude = 1.0);

/// Band-limited random field sum_k a_k cos(k.x + phi_k) over half-plane
/// wavevectors 0 < |k| <= kmax. It is defined as a continuous function, so
/// the same seed gives the same field on every grid.
class RandomTrigField {
public:
    RandomTrigField(int kmax, std::uint64_t seed, double spectral_slope = 1.0);

    /// Rescale so the field's spatial RMS equals `target`.
    RandomTrigField& normalise_rms(double target);
    /// Rescale so the RMS of the perp-gradient (velocity) equals `target`.
    RandomTrigField& normalise_velocity_rms(double target);

    ScalarField sample(const Grid2D& grid) const;
    /// (-d/dy, d/dx) of the field
    VectorField2D perp_gradient(const Grid2D& grid) const;
    /// Laplacian of the field (the vorticity when the field is a streamfunction).
    ScalarField laplacian(const Grid2D& grid) const;

private:
    struct Term {
        int kx, ky;
        double amplitude, phase;
    };
    std::vector<Term> terms_;
};

/// Depth eta = depth + A h(x) with geostrophically balanced velocity
/// u = z x grad(k) / f0 for a constant Coriolis parameter f0.
RswState balanced_rsw_state(const Grid2D& grid, const RswParams& params, double depth, double amplitude, int kmax,
                            std::uint64_t seed);

}  // namespace saltlab
