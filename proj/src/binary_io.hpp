#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace saltlab::detail {

template <class T>
void write_le(std::ostream& out, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    const U bits = std::bit_cast<U>(value);
    char bytes[sizeof(U)];
    for (std::size_t b = 0; b < sizeof(U); ++b) bytes[b] = char((bits >> (8 * b)) & 0xffu);
    out.write(bytes, sizeof(U));
}

template <class T>
T read_le(std::istream& in) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    unsigned char bytes[sizeof(U)] = {};
    in.read(reinterpret_cast<char*>(bytes), sizeof(U));
    if (!in) throw std::runtime_error("unexpected end of binary file");
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) bits |= U(bytes[b]) << (8 * b);
    return std::bit_cast<T>(bits);
}

inline void write_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
    char got[4] = {};
    in.read(got, 4);
    if (!in || std::memcmp(got, magic, 4) != 0)
        throw std::runtime_error(std::string("bad magic, expected ") + magic);
}

}  // namespace saltlab::detail
