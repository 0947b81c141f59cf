#include "saltlab/stratonovich.hpp"

#include <algorithm>
#include <cmath>

namespace saltlab {

namespace {

std::pair<std::size_t, std::size_t> node_range(const TimeGrid& grid, double a, double b) {
    if (!(a <= b)) throw std::invalid_argument("integration bounds are reversed");
    return {grid.node_index(a), grid.node_index(b)};
}

void require_series(std::span<const double> f, const TimeGrid& grid) {
    if (f.size() != grid.n_steps() + 1)
        throw std::invalid_argument("integrand length does not match the path grid");
}

bool all_finite(const StateVector& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

double strat_integral(std::span<const double> f, const DrivingPath& path, std::size_t j, double a, double b) {
    require_series(f, path.grid());
    if (j >= path.n_components()) throw std::out_of_range("component index out of range");
    const auto [na, nb] = node_range(path.grid(), a, b);
    const auto s = path.component(j);
    double sum = 0.0;
    for (std::size_t n = na; n < nb; ++n) sum += 0.5 * (f[n] + f[n + 1]) * (s[n + 1] - s[n]);
    return sum;
}

double ito_sum(std::span<const double> f, const DrivingPath& path, std::size_t j, double a, double b) {
    require_series(f, path.grid());
    if (j >= path.n_components()) throw std::out_of_range("component index out of range");
    const auto [na, nb] = node_range(path.grid(), a, b);
    const auto s = path.component(j);
    double sum = 0.0;
    for (std::size_t n = na; n < nb; ++n) sum += f[n] * (s[n + 1] - s[n]);
    return sum;
}

double covariation(std::span<const double> f, std::span<const double> g, const TimeGrid& grid, double a,
                   double b) {
    if (f.size() != g.size()) throw std::invalid_argument("covariation series lengths differ");
    require_series(f, grid);
    const auto [na, nb] = node_range(grid, a, b);
    double sum = 0.0;
    for (std::size_t n = na; n < nb; ++n) sum += (f[n + 1] - f[n]) * (g[n + 1] - g[n]);
    return sum;
}

StateVector heun_step(const StateVector& x, const VectorMap& drift, std::span<const VectorMap> diffusions,
                      std::span<const double> dS, std::size_t corrector_iterations) {
    if (dS.size() != diffusions.size() + 1)
        throw std::invalid_argument("increment count must equal number of diffusions + 1");
    if (!all_finite(x)) throw SolverAbort(0, "non-finite state entering Heun step");
    auto increment = [&](const StateVector& y) {
        StateVector out = drift(y);
        for (auto& v : out) v *= dS[0];
        for (std::size_t j = 0; j < diffusions.size(); ++j) {
            const StateVector b = diffusions[j](y);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i] * dS[j + 1];
        }
        return out;
    };
    const StateVector f0 = increment(x);
    StateVector pred = x;
    for (std::size_t i = 0; i < x.size(); ++i) pred[i] += f0[i];
    for (std::size_t it = 0; it < corrector_iterations; ++it) {
        const StateVector f1 = increment(pred);
        for (std::size_t i = 0; i < x.size(); ++i) pred[i] = x[i] + 0.5 * (f0[i] + f1[i]);
    }
    if (!all_finite(pred)) throw SolverAbort(0, "non-finite state after Heun step");
    return pred;
}

double smooth_indicator(double t, double a, double b, double width) {
    auto step = [](double s) {
        s = std::clamp(s, 0.0, 1.0);
        return s * s * (3.0 - 2.0 * s);
    };
    return step((t - (a - width)) / width) * step(((b + width) - t) / width);
}

LemmaCheckResult fundamental_lemma_check(std::span<const double> F, const DrivingPath& path, std::size_t j,
                                         double a, double b, std::size_t n_smooth) {
    const auto& grid = path.grid();
    if (!(b > a)) throw std::invalid_argument("lemma check needs a < b");
    if (n_smooth < 1) throw std::invalid_argument("lemma check needs at least one ramp");
    const double w1 = 0.5 * (b - a);
    if (a - w1 < grid.t0() || b + w1 > grid.t1())
        throw std::invalid_argument("[a - (b-a)/2, b + (b-a)/2] must lie inside the path interval");
    const double sharp = strat_integral(F, path, j, a, b);

    LemmaCheckResult result;
    std::vector<double> weighted(F.size());
    for (std::size_t m = 1; m <= n_smooth; ++m) {
        const double width = std::ldexp(b - a, -int(m));
        for (std::size_t n = 0; n < F.size(); ++n) weighted[n] = F[n] * smooth_indicator(grid.time(n), a, b, width);
        const double smooth = strat_integral(weighted, path, j, grid.t0(), grid.t1());
        result.widths.push_back(width);
        result.errors.push_back(std::abs(smooth - sharp));
    }
    return result;
}

double fitted_order(std::span<const double> h, std::span<const double> err) {
    if (h.size() != err.size() || h.size() < 2) throw std::invalid_argument("need >= 2 (h, err) pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace saltlab
