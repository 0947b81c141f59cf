#include "saltlab/initial_conditions.hpp"

#include "saltlab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace saltlab {

ScalarField taylor_green_vorticity(const Grid2D& grid, double amplitude) {
    return ScalarField::from_function(grid, [&](double x, double y) { return 2.0 * amplitude * std::sin(x) * std::sin(y); });
}

VectorField2D taylor_green_velocity(const Grid2D& grid, double amplitude) {
    return {ScalarField::from_function(grid, [&](double x, double y) { return amplitude * std::sin(x) * std::cos(y); }),
            ScalarField::from_function(grid, [&](double x, double y) { return -amplitude * std::cos(x) * std::sin(y); })};
}

RandomTrigField::RandomTrigField(int kmax, std::uint64_t seed, double spectral_slope) {
    if (kmax < 1) throw std::invalid_argument("random field needs kmax >= 1");
    std::uint64_t draw = 0;
    for (int ky = 0; ky <= kmax; ++ky)
        for (int kx = -kmax; kx <= kmax; ++kx) {
            if (ky == 0 && kx <= 0) continue;
            if (kx * kx + ky * ky > kmax * kmax) continue;
            const double kn = std::hypot(double(kx), double(ky));
            const double a = CounterNormal::normal(seed, stream_tag::initial_condition, draw++) * std::pow(kn, -spectral_slope);
            const double phi = 2.0 * std::numbers::pi * CounterNormal::uniform(seed, stream_tag::initial_condition, draw++);
            terms_.push_back({kx, ky, a, phi});
        }
}

RandomTrigField& RandomTrigField::normalise_rms(double target) {
    double ms = 0.0;  // mean of cos^2 is 1/2 per distinct half-plane mode
    for (const auto& t : terms_) ms += 0.5 * t.amplitude * t.amplitude;
    const double s = target / std::sqrt(ms);
    for (auto& t : terms_) t.amplitude *= s;
    return *this;
}

RandomTrigField& RandomTrigField::normalise_velocity_rms(double target) {
    double ms = 0.0;
    for (const auto& t : terms_) ms += 0.5 * t.amplitude * t.amplitude * double(t.kx * t.kx + t.ky * t.ky);
    const double s = target / std::sqrt(ms);
    for (auto& t : terms_) t.amplitude *= s;
    return *this;
}

ScalarField RandomTrigField::sample(const Grid2D& grid) const {
    return ScalarField::from_function(grid, [&](double x, double y) {
        double s = 0.0;
        for (const auto& t : terms_) s += t.amplitude * std::cos(t.kx * x + t.ky * y + t.phase);
        return s;
    });
}

VectorField2D RandomTrigField::perp_gradient(const Grid2D& grid) const {
    // psi = a cos(theta): d/dx psi = -a kx sin(theta)
    auto u = ScalarField::from_function(grid, [&](double x, double y) {
        double s = 0.0;
        for (const auto& t : terms_) s += t.amplitude * t.ky * std::sin(t.kx * x + t.ky * y + t.phase);
        return s;
    });
    auto v = ScalarField::from_function(grid, [&](double x, double y) {
        double s = 0.0;
        for (const auto& t : terms_) s -= t.amplitude * t.kx * std::sin(t.kx * x + t.ky * y + t.phase);
        return s;
    });
    return {std::move(u), std::move(v)};
}

ScalarField RandomTrigField::laplacian(const Grid2D& grid) const {
    return ScalarField::from_function(grid, [&](double x, double y) {
        double s = 0.0;
        for (const auto& t : terms_)
            s -= t.amplitude * double(t.kx * t.kx + t.ky * t.ky) * std::cos(t.kx * x + t.ky * y + t.phase);
        return s;
    });
}

RswState balanced_rsw_state(const Grid2D& grid, const RswParams& params, double depth, double amplitude, int kmax,
                            std::uint64_t seed) {
    const double f0 = mean(params.f);
    if (f0 == 0.0) throw std::invalid_argument("balanced state needs a nonzero mean Coriolis parameter");
    RandomTrigField h(kmax, seed, 2.0);
    h.normalise_rms(1.0);
    RswState s;
    s.eta = h.sample(grid);
    s.eta *= amplitude;
    for (std::size_t n = 0; n < s.eta.size(); ++n) s.eta[n] += depth;
    // k = (eta - b)/(eps F); geostrophic balance f z x u = -grad k
    const double scale = amplitude / (params.epsilon * params.froude * f0);
    ScalarField kfield = h.sample(grid);
    kfield *= scale;
    if (max_abs(params.b) > 0.0) kfield.axpy(-1.0 / (params.epsilon * params.froude * f0), params.b);
    s.u = saltlab::perp_gradient(kfield);
    return s;
}

}  // namespace saltlab
