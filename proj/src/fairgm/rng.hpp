#pragma once

#include <cstdint>
#include <random>

namespace fairgm {

// All stochastic code draws from a seeded mt19937_64. Independent streams
// (per sensitive group, per benchmark cell) are derived from a base seed with
// splitmix64 so that stream k is reproducible regardless of which other
// streams were consumed.
using Rng = std::mt19937_64;

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(split_seed(seed, stream));
}

}  // namespace fairgm
