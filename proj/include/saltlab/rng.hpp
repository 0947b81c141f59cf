#pragma once

#include <cstdint>

namespace saltlab {

/// Counter-based Gaussian source: every draw is a pure function of
/// (seed, stream, index), so adding streams never shifts existing ones.
class CounterNormal {
public:
    static std::uint64_t mix(std::uint64_t x);
    static std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
    /// Uniform on the open interval (0, 1).
    static double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
    /// Standard normal via Box-Muller on two keyed uniforms.
    static double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
};

// Stream tags keep the generators of different operations disjoint.
namespace stream_tag {
inline constexpr std::uint64_t brownian = 0;
inline constexpr std::uint64_t ou = 1ull << 40;
inline constexpr std::uint64_t bridge = 2ull << 40;
inline constexpr std::uint64_t initial_condition = 3ull << 40;
inline constexpr std::uint64_t particles = 4ull << 40;
}  // namespace stream_tag

}  // namespace saltlab
