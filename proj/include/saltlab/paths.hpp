#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace saltlab {

/// Uniform grid t0 < t1 with n_steps intervals.
class TimeGrid {
public:
    TimeGrid(double t0, double t1, std::size_t n_steps);

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    std::size_t n_steps() const { return n_steps_; }
    double dt() const { return dt_; }
    /// t0 + n * dt, the exact value stored in component 0.
    double time(std::size_t n) const { return t0_ + double(n) * dt_; }
    /// Node index of t; throws if t is not (to rounding) a grid node.
    std::size_t node_index(double t) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_;
    double t1_;
    std::size_t n_steps_;
    double dt_;
};

enum class ComponentKind { FiniteVariation, Martingale };

/// One sampled realisation of S_t = (t, W^1, ..., W^K).
class DrivingPath {
public:
    DrivingPath(TimeGrid grid, std::vector<std::vector<double>> values, std::uint64_t seed);

    const TimeGrid& grid() const { return grid_; }
    std::uint64_t seed() const { return seed_; }
    /// K + 1
    std::size_t n_components() const { return values_.size(); }
    /// Number of martingale components K.
    std::size_t n_noise() const { return values_.size() - 1; }
    ComponentKind kind(std::size_t j) const {
        return j == 0 ? ComponentKind::FiniteVariation : ComponentKind::Martingale;
    }

    std::span<const double> component(std::size_t j) const { return values_.at(j); }
    double value(std::size_t j, std::size_t n) const { return values_[j][n]; }
    double increment(std::size_t j, std::size_t n) const { return values_[j][n + 1] - values_[j][n]; }
    /// All K + 1 increments over step n; entry 0 is dt.
    std::vector<double> increments(std::size_t n) const;

    friend bool operator==(const DrivingPath&, const DrivingPath&) = default;

private:
    TimeGrid grid_;
    std::vector<std::vector<double>> values_;
    std::uint64_t seed_;
};

/// Components 1..K are independent standard Brownian motions started at 0.
DrivingPath sample_brownian(const TimeGrid& grid, int K, std::uint64_t seed);

/// Ornstein-Uhlenbeck components dX = -theta X dt + sigma dW, X(t0) = 0,
/// advanced with the exact Gaussian transition.
DrivingPath sample_ou(const TimeGrid& grid, int K, double theta, double sigma, std::uint64_t seed);

/// Subdivides every step into `factor` substeps. Martingale components are
/// filled by Brownian bridges pinned to the coarse values; coarse nodes are
/// copied bit-exactly.
DrivingPath refine(const DrivingPath& path, std::size_t factor, std::uint64_t seed);

/// Binary "SMDP" dump: little-endian header then component-major float64.
void write_path(const std::filesystem::path& file, const DrivingPath& path);
DrivingPath read_path(const std::filesystem::path& file);

}  // namespace saltlab
