#pragma once

#include "saltlab/config.hpp"
#include "saltlab/paths.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace saltlab {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 2, kExitSolverAbort = 3, kExitCheckFailed = 4 };

struct MemberOutcome {
    int index = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::size_t last_valid_step = 0;
    std::string message;
    double wall_time = 0.0;
    /// Mode-specific summary values (e.g. fitted slope, success fraction).
    std::map<std::string, double> summary;
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::filesystem::path out_dir;
    std::vector<MemberOutcome> members;
};

/// Driving path for one ensemble member, as configured (Brownian or OU).
DrivingPath make_driving_path(const RunConfig& cfg, std::size_t K, std::uint64_t seed);

/// Executes a run: one member_NNN directory per ensemble member plus a
/// manifest.json in cfg.out. Members run on up to cfg.workers threads.
RunOutcome run(const RunConfig& cfg, std::ostream& log);

struct StudyLevel {
    int level = 0;
    double dt = 0.0;
    int nx = 0;
    double value = 0.0;       // median over members
    double log2_ratio = 0.0;  // log2(value[level-1] / value[level]); 0 for level 0
};

struct StudyReport {
    std::map<std::string, std::vector<StudyLevel>> metrics;
    std::map<std::string, double> fitted_order;
    /// Median over members of per-member error ratios between consecutive levels.
    std::map<std::string, double> median_ratio;
};

/// Nested-dt refinement study: every level shares one Brownian realisation via
/// bridge refinement; the grid doubles with each level when study.refine_space.
/// Writes study.csv and study.json into cfg.out.
StudyReport convergence_study(const RunConfig& cfg, int levels, std::ostream& log);

}  // namespace saltlab
