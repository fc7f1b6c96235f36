#pragma once

#include "sgdnet/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace sgdnet {

/// Named sub-streams derived from a run's base seed.
enum class Stream : std::uint64_t {
    split = 1,
    svd = 2,
    init = 3,
    m0 = 4,
    eval = 5,
    graph = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t index = 0) {
    return splitmix64(splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(stream))) + index);
}

using Rng = std::mt19937_64;

/// Uniform double in [lo, hi) from the top 53 bits of one draw.
inline double uniform(Rng& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi, Rng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, lo, hi);
    return m;
}

/// Standard normal via Box-Muller; independent of the standard library's distribution code.
inline double standard_normal(Rng& rng) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform(rng, 0.0, 1.0);
    const double u2 = uniform(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace sgdnet
