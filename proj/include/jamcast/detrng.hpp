#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace jamcast {

// Counter-based splitmix64 streams. Distributions are hand-rolled because the
// <random> ones are not pinned by the standard and would break byte-identical
// output across toolchains.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct DetStream {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0,1)

    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0,1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
};

inline DetStream make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                             std::uint64_t salt) {
    return DetStream{mix64(mix64(mix64(seed ^ salt) ^ a) ^ b)};
}

}  // namespace jamcast
