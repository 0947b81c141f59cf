#pragma once

#include "saltlab/fields.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace saltlab {

enum class NoisePhase { Cos, Sin, Uniform };

/// One transport-noise field.
///   Cos/Sin:  xi(x) = amplitude * (k_perp / |k|) * trig(k . x),  k_perp = (-ky, kx)
///   Uniform:  xi(x) = (ux, uy) everywhere
struct NoiseMode {
    int kx = 0;
    int ky = 0;
    NoisePhase phase = NoisePhase::Cos;
    double amplitude = 0.0;
    double ux = 0.0;
    double uy = 0.0;

    std::array<double, 2> evaluate(double x, double y) const;
    /// sup-norm of the continuous field.
    double sup_norm() const;

    friend bool operator==(const NoiseMode&, const NoiseMode&) = default;
};

std::string to_string(NoisePhase p);
NoisePhase phase_from_string(const std::string& s);

/// Finite family of divergence-free fields xi_1..xi_K, cached on a grid.
class NoiseBasis {
public:
    NoiseBasis() = default;
    NoiseBasis(const Grid2D& grid, std::vector<NoiseMode> modes);

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return modes_.size(); }
    const std::vector<NoiseMode>& modes() const { return modes_; }
    const VectorField2D& field(std::size_t k) const { return fields_.at(k); }
    /// d(xi_k)/dx and d(xi_k)/dy, each a vector field.
    const VectorField2D& dx(std::size_t k) const { return dx_.at(k); }
    const VectorField2D& dy(std::size_t k) const { return dy_.at(k); }

    /// Sum_k xi_k(x, y) dW_k at an arbitrary point, exact.
    std::array<double, 2> evaluate(double x, double y, std::span<const double> dW) const;

private:
    Grid2D grid_;
    std::vector<NoiseMode> modes_;
    std::vector<VectorField2D> fields_;
    std::vector<VectorField2D> dx_;
    std::vector<VectorField2D> dy_;
};

/// Number of distinct trigonometric modes with 0 < |k| <= kmax.
std::size_t admissible_mode_count(int kmax);

/// Curl-of-Fourier-mode basis with amplitude c |k|^-gamma. Wavevectors are
/// taken from the half plane (ky > 0, or ky == 0 and kx > 0), ordered by |k|,
/// then ky, then kx; each wavevector contributes a cos then a sin mode.
NoiseBasis make_fourier_basis(const Grid2D& grid, std::size_t K, double gamma, double c, int kmax);

/// Sum_k xi_k dW_k on the grid. dW holds the K martingale increments.
VectorField2D transport_increment(const NoiseBasis& basis, std::span<const double> dW);

}  // namespace saltlab
