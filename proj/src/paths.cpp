#include "saltlab/paths.hpp"

#include "binary_io.hpp"
#include "saltlab/rng.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace saltlab {

TimeGrid::TimeGrid(double t0, double t1, std::size_t n_steps) : t0_(t0), t1_(t1), n_steps_(n_steps) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
        throw std::invalid_argument("time grid requires finite t1 > t0");
    if (n_steps < 1) throw std::invalid_argument("time grid requires n_steps >= 1");
    dt_ = (t1 - t0) / double(n_steps);
}

std::size_t TimeGrid::node_index(double t) const {
    const double s = (t - t0_) / dt_;
    const double r = std::round(s);
    if (r < 0.0 || r > double(n_steps_) || std::abs(s - r) > 1e-9 * std::max(1.0, r))
        throw std::invalid_argument("time " + std::to_string(t) + " is not a grid node");
    return std::size_t(r);
}

DrivingPath::DrivingPath(TimeGrid grid, std::vector<std::vector<double>> values, std::uint64_t seed)
    : grid_(grid), values_(std::move(values)), seed_(seed) {
    if (values_.empty()) throw std::invalid_argument("driving path needs the time component");
    for (const auto& c : values_)
        if (c.size() != grid_.n_steps() + 1)
            throw std::invalid_argument("driving path component has wrong length");
}

std::vector<double> DrivingPath::increments(std::size_t n) const {
    std::vector<double> dS(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j) dS[j] = values_[j][n + 1] - values_[j][n];
    return dS;
}

namespace {

std::vector<double> time_component(const TimeGrid& grid) {
    std::vector<double> t(grid.n_steps() + 1);
    for (std::size_t n = 0; n <= grid.n_steps(); ++n) t[n] = grid.time(n);
    return t;
}

}  // namespace

DrivingPath sample_brownian(const TimeGrid& grid, int K, std::uint64_t seed) {
    if (K < 0) throw std::invalid_argument("number of noise components must be >= 0");
    std::vector<std::vector<double>> values;
    values.reserve(std::size_t(K) + 1);
    values.push_back(time_component(grid));
    const double sdt = std::sqrt(grid.dt());
    for (int j = 1; j <= K; ++j) {
        std::vector<double> w(grid.n_steps() + 1, 0.0);
        for (std::size_t n = 0; n < grid.n_steps(); ++n)
            w[n + 1] = w[n] + sdt * CounterNormal::normal(seed, stream_tag::brownian + j, n);
        values.push_back(std::move(w));
    }
    return {grid, std::move(values), seed};
}

DrivingPath sample_ou(const TimeGrid& grid, int K, double theta, double sigma, std::uint64_t seed) {
    if (K < 0) throw std::invalid_argument("number of noise components must be >= 0");
    if (!(theta >= 0.0)) throw std::invalid_argument("OU rate theta must be >= 0");
    if (!(sigma >= 0.0)) throw std::invalid_argument("OU amplitude sigma must be >= 0");
    const double dt = grid.dt();
    const double decay = std::exp(-theta * dt);
    // theta -> 0 limit of the transition standard deviation is sqrt(dt).
    const double sd = theta > 0.0 ? sigma * std::sqrt(-std::expm1(-2.0 * theta * dt) / (2.0 * theta))
                                  : sigma * std::sqrt(dt);
    std::vector<std::vector<double>> values;
    values.push_back(time_component(grid));
    for (int j = 1; j <= K; ++j) {
        std::vector<double> x(grid.n_steps() + 1, 0.0);
        for (std::size_t n = 0; n < grid.n_steps(); ++n)
            x[n + 1] = x[n] * decay + sd * CounterNormal::normal(seed, stream_tag::ou + j, n);
        values.push_back(std::move(x));
    }
    return {grid, std::move(values), seed};
}

DrivingPath refine(const DrivingPath& path, std::size_t factor, std::uint64_t seed) {
    if (factor < 2) throw std::invalid_argument("refinement factor must be >= 2");
    const auto& coarse = path.grid();
    const TimeGrid fine(coarse.t0(), coarse.t1(), coarse.n_steps() * factor);
    const double h = fine.dt();
    std::vector<std::vector<double>> values;
    values.push_back(time_component(fine));
    for (std::size_t j = 1; j < path.n_components(); ++j) {
        const auto c = path.component(j);
        std::vector<double> w(fine.n_steps() + 1);
        for (std::size_t n = 0; n < coarse.n_steps(); ++n) {
            const std::size_t base = n * factor;
            w[base] = c[n];
            const double end = c[n + 1];
            double current = c[n];
            for (std::size_t m = 1; m < factor; ++m) {
                // Bridge from `current` at s_{m-1} to `end`, remaining substeps r.
                const double r = double(factor - m + 1);
                const double mu = current + (end - current) / r;
                const double sd = std::sqrt(h * (r - 1.0) / r);
                current = mu + sd * CounterNormal::normal(seed, stream_tag::bridge + j, base + m);
                w[base + m] = current;
            }
        }
        w[fine.n_steps()] = c[coarse.n_steps()];
        values.push_back(std::move(w));
    }
    return {fine, std::move(values), seed};
}

void write_path(const std::filesystem::path& file, const DrivingPath& path) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    detail::write_magic(out, "SMDP");
    detail::write_le<std::uint32_t>(out, 1);
    detail::write_le<std::uint64_t>(out, path.grid().n_steps());
    detail::write_le<std::uint32_t>(out, std::uint32_t(path.n_components()));
    for (std::size_t j = 0; j < path.n_components(); ++j)
        for (double v : path.component(j)) detail::write_le<double>(out, v);
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

DrivingPath read_path(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    detail::expect_magic(in, "SMDP");
    if (detail::read_le<std::uint32_t>(in) != 1) throw std::runtime_error("unsupported SMDP version");
    const auto n_steps = detail::read_le<std::uint64_t>(in);
    const auto n_comp = detail::read_le<std::uint32_t>(in);
    if (n_steps < 1 || n_comp < 1) throw std::runtime_error("corrupt SMDP header");
    std::vector<std::vector<double>> values(n_comp, std::vector<double>(n_steps + 1));
    for (auto& c : values)
        for (auto& v : c) v = detail::read_le<double>(in);
    if (!in) throw std::runtime_error("truncated SMDP file");
    const TimeGrid grid(values[0].front(), values[0].back(), n_steps);
    return {grid, std::move(values), 0};
}

}  // namespace saltlab
