#pragma once

#include "oclust/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oclust {

// All randomized operations draw from mt19937_64 through the helpers below
// instead of <random> distribution objects, whose output is implementation
// defined. This keeps results bit-identical for a fixed seed.
using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0x517cc1b727220a95ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n) via rejection.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return static_cast<std::size_t>(v % n);
}

// Index drawn proportionally to non-negative weights (CDF scan).
// Falls back to uniform when all weights vanish.
std::size_t weighted_index(Rng& rng, const std::vector<double>& weights);

// Standard normal via Box-Muller on our own uniforms.
inline double normal_double(Rng& rng) {
    const double u1 = 1.0 - uniform_double(rng);  // (0, 1]
    const double u2 = uniform_double(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

Vector normal_vector(Rng& rng, int d);

// k distinct indices from [0, n), in selection order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

}  // namespace oclust
