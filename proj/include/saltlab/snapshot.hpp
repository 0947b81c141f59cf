#pragma once

#include "saltlab/fields.hpp"

#include <filesystem>
#include <vector>

namespace saltlab {

/// "SFLD" field snapshot: little-endian header {magic, u32 version, u32 nx,
/// u32 ny, u32 n_fields, f64 time} followed by row-major float64 fields.
struct Snapshot {
    double time = 0.0;
    std::vector<ScalarField> fields;
};

void write_snapshot(const std::filesystem::path& file, double time, const std::vector<const ScalarField*>& fields);
Snapshot read_snapshot(const std::filesystem::path& file);

}  // namespace saltlab
