#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace decmg {

/// Uniform double in [0, 1) from the top 53 bits of an mt19937_64 draw;
/// bit-reproducible across platforms, unlike uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<double> uniform01_vector(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = uniform01(rng);
    return v;
}

} // namespace decmg
