#pragma once

#include "saltlab/fields.hpp"
#include "saltlab/noise_basis.hpp"
#include "saltlab/paths.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace saltlab {

using Point2 = std::array<double, 2>;

/// Lagrangian markers x_t = g_t x_0, always folded into [0, 2pi)^2.
struct ParticleSet {
    std::vector<Point2> initial;
    std::vector<Point2> positions;

    ParticleSet() = default;
    explicit ParticleSet(std::vector<Point2> start);
    std::size_t size() const { return positions.size(); }
};

/// Uniformly scattered particles, reproducible from the seed.
ParticleSet random_particles(std::size_t n, std::uint64_t seed);

/// Drift velocity sampled on the nodes of a path grid. A single frame means
/// a steady field.
class VelocitySeries {
public:
    VelocitySeries() = default;
    explicit VelocitySeries(VectorField2D steady) { frames_.push_back(std::move(steady)); }
    explicit VelocitySeries(std::vector<VectorField2D> frames) : frames_(std::move(frames)) {}

    const VectorField2D& at(std::size_t n) const { return frames_.size() == 1 ? frames_[0] : frames_.at(n); }
    bool steady() const { return frames_.size() == 1; }
    std::size_t frames() const { return frames_.size(); }

private:
    std::vector<VectorField2D> frames_;
};

/// Heun steps n0 -> n1 of dx = u(t, x) dt + sum_k xi_k(x) o dW_k, with u
/// spectrally interpolated and xi evaluated exactly.
ParticleSet advance_particles(const ParticleSet& particles, const VelocitySeries& u, const NoiseBasis& basis,
                              const DrivingPath& path, std::size_t n0, std::size_t n1);

/// One Heun step of the particle SDE with u_n at the predictor and u_{n+1}
/// at the corrector. dS[0] = dt, dS[1..K] noise increments.
ParticleSet advance_particles_step(const ParticleSet& particles, const VectorField2D& u_n,
                                   const VectorField2D& u_np1, const NoiseBasis& basis, std::span<const double> dS);

/// Single Heun step of da + dx_t . grad a = 0 using u_n at the predictor and
/// u_{n+1} at the corrector.
ScalarField advect_scalar_step(const ScalarField& a, const VectorField2D& u_n, const VectorField2D& u_np1,
                               const NoiseBasis& basis, std::span<const double> dS);

/// Single flux-form Heun step of dD + div(D dx_t) = 0.
ScalarField advect_density_step(const ScalarField& D, const VectorField2D& u_n, const VectorField2D& u_np1,
                                const NoiseBasis& basis, std::span<const double> dS);

/// Advects over the whole path; returns the field at every `stride`-th node
/// (the final node is always included).
std::vector<ScalarField> advect_scalar(const ScalarField& a0, const VelocitySeries& u, const NoiseBasis& basis,
                                       const DrivingPath& path, std::size_t stride = 1);
std::vector<ScalarField> advect_density(const ScalarField& D0, const VelocitySeries& u, const NoiseBasis& basis,
                                        const DrivingPath& path, std::size_t stride = 1);

/// r_n = max_p |a_n(x_p(t_n)) - a_0(x_p(0))|, one entry per series element.
std::vector<double> kiw_residual(std::span<const ScalarField> a_series, std::span<const ParticleSet> particles);

/// Residual of a single snapshot against the initial field.
double kiw_residual(const ScalarField& a0, const ScalarField& a, const ParticleSet& particles);

}  // namespace saltlab
