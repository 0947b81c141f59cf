#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace saltlab {

/// Per-step monitored quantities, kept in insertion order.
struct DiagnosticsRecord {
    std::size_t step = 0;
    double time = 0.0;
    std::vector<std::pair<std::string, double>> metrics;

    void set(const std::string& name, double value);
    /// Throws std::out_of_range for unknown names.
    double get(const std::string& name) const;
    bool has(const std::string& name) const;
};

/// CSV with header "step,time,<columns>" and %.17g values, so reruns diff clean.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns);
    void write(const DiagnosticsRecord& rec);

private:
    std::ostream& out_;
    std::vector<std::string> columns_;
};

std::string format_double(double v);

}  // namespace saltlab
