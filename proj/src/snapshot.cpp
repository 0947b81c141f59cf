#include "saltlab/snapshot.hpp"

#include "binary_io.hpp"

#include <fstream>
#include <stdexcept>

namespace saltlab {

void write_snapshot(const std::filesystem::path& file, double time, const std::vector<const ScalarField*>& fields) {
    if (fields.empty()) throw std::invalid_argument("snapshot needs at least one field");
    const auto& g = fields.front()->grid();
    for (const auto* f : fields)
        if (!(f->grid() == g)) throw std::invalid_argument("snapshot fields must share a grid");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    detail::write_magic(out, "SFLD");
    detail::write_le<std::uint32_t>(out, 1);
    detail::write_le<std::uint32_t>(out, std::uint32_t(g.nx()));
    detail::write_le<std::uint32_t>(out, std::uint32_t(g.ny()));
    detail::write_le<std::uint32_t>(out, std::uint32_t(fields.size()));
    detail::write_le<double>(out, time);
    for (const auto* f : fields)
        for (double v : f->values()) detail::write_le<double>(out, v);
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

Snapshot read_snapshot(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    detail::expect_magic(in, "SFLD");
    if (detail::read_le<std::uint32_t>(in) != 1) throw std::runtime_error("unsupported SFLD version");
    const auto nx = detail::read_le<std::uint32_t>(in);
    const auto ny = detail::read_le<std::uint32_t>(in);
    const auto nf = detail::read_le<std::uint32_t>(in);
    Snapshot s;
    s.time = detail::read_le<double>(in);
    const Grid2D g(nx, ny);
    for (std::uint32_t k = 0; k < nf; ++k) {
        ScalarField f(g);
        for (auto& v : f.values()) v = detail::read_le<double>(in);
        s.fields.push_back(std::move(f));
    }
    return s;
}

}  // namespace saltlab
