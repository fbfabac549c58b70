#pragma once

#include <cstdint>
#include <random>

namespace tou {

// All randomized code draws through these helpers instead of the std
// distributions, whose output is implementation-defined. Keeps seeded runs
// byte-identical across standard libraries.

inline std::uint64_t uniform_u64_below(std::mt19937_64& rng, std::uint64_t n) {
    // rejection sampling over the biased tail
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

}  // namespace tou
