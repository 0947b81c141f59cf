#include "saltlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace saltlab {

std::uint64_t CounterNormal::mix(std::uint64_t x) {
    // splitmix64 finaliser
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t CounterNormal::hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return mix(mix(mix(seed) ^ stream) ^ index);
}

double CounterNormal::uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t bits = hash(seed, stream, index) >> 11;  // 53 bits
    return (double(bits) + 0.5) * 0x1.0p-53;
}

double CounterNormal::normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const double u1 = uniform(seed, stream, 2 * index);
    const double u2 = uniform(seed, stream, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace saltlab
