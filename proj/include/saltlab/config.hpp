#pragma once

#include "saltlab/noise_basis.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace saltlab {

enum class RunMode { EulerVorticity, EulerVelocity, Rsw, AdvectionTest, SdeConvergence, LemmaCheck };

std::string to_string(RunMode m);
RunMode mode_from_string(const std::string& s);
bool is_field_mode(RunMode m);

/// Configuration problem tied to a dotted key path such as "time.dt".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    RunMode mode = RunMode::EulerVorticity;

    // [grid]
    int nx = 0;
    int ny = 0;

    // [time]
    double dt = 0.0;
    double T = 0.0;

    // [noise]
    int K = 0;
    double gamma = 2.0;
    double c = 0.1;
    int kmax = 4;
    std::vector<NoiseMode> modes;  // explicit list; overrides the generator when non-empty
    std::string path = "brownian";  // brownian | ou
    double ou_theta = 1.0;
    double ou_sigma = 1.0;

    // [physics]
    double epsilon = 0.1;
    double froude = 1.0;
    double coriolis = 1.0;
    double topography = 0.0;  // amplitude of b = A cos x cos y

    // [init]
    std::string init = "default";  // default | taylor-green | random | balanced | rest | zero
    double amplitude = 1.0;
    int init_kmax = 4;
    std::uint64_t init_seed = 1;
    double depth = 1.0;

    // [run]
    std::uint64_t seed = 1;
    int members = 1;
    int workers = 1;
    std::string out = "saltlab-out";
    int snapshot_every = 0;
    int diagnostics_every = 1;
    bool project_noise_channels = true;
    int corrector_iterations = 1;
    int particles = 100;

    // [sde]
    double sde_mu = 0.0;
    double sde_sigma = 1.0;
    double sde_x0 = 1.0;
    int sde_paths = 200;
    int sde_levels = 7;

    // [lemma]
    double lemma_a = 0.25;
    double lemma_b = 0.75;
    int lemma_smooth = 8;
    int lemma_seeds = 100;

    // [study]
    bool refine_space = true;

    std::size_t n_steps() const;
    /// Initial-condition kind after resolving "default" for the mode.
    std::string resolved_init() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the sectioned key = value format described in the README.
/// Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& file);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Range and consistency checks; called by parse_config.
void validate_config(const RunConfig& c);

/// Noise basis described by the config on the given grid.
NoiseBasis make_noise_basis(const RunConfig& c, const Grid2D& grid);

}  // namespace saltlab
