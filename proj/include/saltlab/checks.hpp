#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace saltlab {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    /// Measured values against thresholds, one line.
    std::string detail;
    double seconds = 0.0;
};

/// Number of built-in acceptance checks (ids 1..check_count()).
int check_count();
std::string check_name(int id);

/// Runs one check; throws std::out_of_range for unknown ids.
CheckResult run_check(int id);

/// Runs the selected checks (all when empty), printing one PASS/FAIL line per
/// check as it finishes.
std::vector<CheckResult> run_checks(std::ostream& out, const std::vector<int>& ids = {});

std::string format_check_line(const CheckResult& r);

}  // namespace saltlab
