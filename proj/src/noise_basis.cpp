#include "saltlab/noise_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace saltlab {

std::array<double, 2> NoiseMode::evaluate(double x, double y) const {
    if (phase == NoisePhase::Uniform) return {ux, uy};
    const double kn = std::hypot(double(kx), double(ky));
    const double arg = kx * x + ky * y;
    const double s = amplitude * (phase == NoisePhase::Cos ? std::cos(arg) : std::sin(arg)) / kn;
    return {-ky * s, kx * s};
}

double NoiseMode::sup_norm() const {
    return phase == NoisePhase::Uniform ? std::hypot(ux, uy) : std::abs(amplitude);
}

std::string to_string(NoisePhase p) {
    switch (p) {
        case NoisePhase::Cos: return "cos";
        case NoisePhase::Sin: return "sin";
        case NoisePhase::Uniform: return "const";
    }
    return "?";
}

NoisePhase phase_from_string(const std::string& s) {
    if (s == "cos") return NoisePhase::Cos;
    if (s == "sin") return NoisePhase::Sin;
    if (s == "const") return NoisePhase::Uniform;
    throw std::invalid_argument("unknown noise phase '" + s + "'");
}

NoiseBasis::NoiseBasis(const Grid2D& grid, std::vector<NoiseMode> modes) : grid_(grid), modes_(std::move(modes)) {
    for (const auto& m : modes_) {
        if (m.phase != NoisePhase::Uniform && m.kx == 0 && m.ky == 0)
            throw std::invalid_argument("trigonometric noise mode needs a nonzero wavevector");
        VectorField2D xi(grid_);
        for (std::size_t i = 0; i < grid_.nx(); ++i)
            for (std::size_t j = 0; j < grid_.ny(); ++j) {
                const auto v = m.evaluate(grid_.x(i), grid_.y(j));
                xi.u(i, j) = v[0];
                xi.v(i, j) = v[1];
            }
        dx_.push_back({derivative(xi.u, Axis::X), derivative(xi.v, Axis::X)});
        dy_.push_back({derivative(xi.u, Axis::Y), derivative(xi.v, Axis::Y)});
        fields_.push_back(std::move(xi));
    }
}

std::array<double, 2> NoiseBasis::evaluate(double x, double y, std::span<const double> dW) const {
    if (dW.size() != modes_.size()) throw std::invalid_argument("noise increment count does not match basis");
    std::array<double, 2> out{0.0, 0.0};
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        if (dW[k] == 0.0) continue;
        const auto v = modes_[k].evaluate(x, y);
        out[0] += v[0] * dW[k];
        out[1] += v[1] * dW[k];
    }
    return out;
}

namespace {

std::vector<std::pair<int, int>> half_plane_wavevectors(int kmax) {
    std::vector<std::pair<int, int>> ks;
    for (int ky = 0; ky <= kmax; ++ky)
        for (int kx = -kmax; kx <= kmax; ++kx) {
            if (ky == 0 && kx <= 0) continue;
            if (kx * kx + ky * ky <= kmax * kmax) ks.emplace_back(kx, ky);
        }
    std::sort(ks.begin(), ks.end(), [](auto a, auto b) {
        return std::make_tuple(a.first * a.first + a.second * a.second, a.second, a.first) <
               std::make_tuple(b.first * b.first + b.second * b.second, b.second, b.first);
    });
    return ks;
}

}  // namespace

std::size_t admissible_mode_count(int kmax) { return kmax < 1 ? 0 : 2 * half_plane_wavevectors(kmax).size(); }

NoiseBasis make_fourier_basis(const Grid2D& grid, std::size_t K, double gamma, double c, int kmax) {
    if (K > admissible_mode_count(kmax))
        throw std::invalid_argument("K = " + std::to_string(K) + " exceeds the " +
                                    std::to_string(admissible_mode_count(kmax)) + " modes with |k| <= " +
                                    std::to_string(kmax));
    const auto ks = half_plane_wavevectors(kmax);
    std::vector<NoiseMode> modes;
    for (std::size_t n = 0; n < K; ++n) {
        const auto [kx, ky] = ks[n / 2];
        NoiseMode m;
        m.kx = kx;
        m.ky = ky;
        m.phase = (n % 2 == 0) ? NoisePhase::Cos : NoisePhase::Sin;
        m.amplitude = c * std::pow(std::hypot(double(kx), double(ky)), -gamma);
        modes.push_back(m);
    }
    return {grid, std::move(modes)};
}

VectorField2D transport_increment(const NoiseBasis& basis, std::span<const double> dW) {
    if (dW.size() != basis.size()) throw std::invalid_argument("noise increment count does not match basis");
    VectorField2D out(basis.grid());
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (dW[k] != 0.0) out.axpy(dW[k], basis.field(k));
    return out;
}

}  // namespace saltlab
