#pragma once

#include <cstdint>
#include <random>

namespace rumorlab {

// splitmix64 finalizer; used both as a stream-independent bit mixer and to
// expand one master seed into many uncorrelated derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// i-th derived seed of a master seed. Stable contract: reports and traces
// produced from (seed, i) must never change across releases.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i) {
    return mix64(master ^ mix64(i + 1));
}

using RandomEngine = std::mt19937_64;

// Uniform double in [0,1) with 53 random bits.
inline double uniform01(RandomEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(RandomEngine& rng, double p) { return uniform01(rng) < p; }

// Unbiased integer in [0, bound) by rejection. bound >= 1.
inline std::uint64_t uniform_below(RandomEngine& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % bound;
}

}  // namespace rumorlab
