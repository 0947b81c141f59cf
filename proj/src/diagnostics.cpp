#include "saltlab/diagnostics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace saltlab {

void DiagnosticsRecord::set(const std::string& name, double value) {
    for (auto& [k, v] : metrics)
        if (k == name) {
            v = value;
            return;
        }
    metrics.emplace_back(name, value);
}

double DiagnosticsRecord::get(const std::string& name) const {
    for (const auto& [k, v] : metrics)
        if (k == name) return v;
    throw std::out_of_range("no diagnostic named '" + name + "'");
}

bool DiagnosticsRecord::has(const std::string& name) const {
    return std::any_of(metrics.begin(), metrics.end(), [&](const auto& kv) { return kv.first == name; });
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns) : out_(out), columns_(std::move(columns)) {
    out_ << "step,time";
    for (const auto& c : columns_) out_ << ',' << c;
    out_ << '\n';
}

void CsvWriter::write(const DiagnosticsRecord& rec) {
    out_ << rec.step << ',' << format_double(rec.time);
    for (const auto& c : columns_) out_ << ',' << format_double(rec.get(c));
    out_ << '\n';
}

}  // namespace saltlab
