#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rdesn::rng {

// All randomness in the project flows through these helpers. mt19937_64 is
// bit-exact across standard libraries; the uniform mappings below avoid
// std::uniform_real_distribution, whose output is implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent substream seed from a base seed and a label.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(seed ^ splitmix64(h) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

/// Standard normal via Box-Muller (deterministic two-draw form).
inline double gaussian(std::mt19937_64& g) {
    double u1 = uniform01(g);
    double u2 = uniform01(g);
    while (u1 == 0.0) u1 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace rdesn::rng
