// rng.hpp
// Counter-based uniform randoms built on the splitmix64 finalizer. Each
// (seed, event index, draw slot) triple maps to one double in [0, 1)
// statelessly, so photon chunks can be farmed out to any number of workers
// and still reproduce the single-threaded tallies bit for bit.

#pragma once

#include <cstdint>

namespace wmsim {

// splitmix64 output/finalizer step (Steele, Lea, Flood).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ index);
    h = splitmix64(h ^ slot);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Decorrelated sub-stream seed (used for Monte Carlo trial streams).
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ (stream + 1));
}

}  // namespace wmsim
