#pragma once

#include <cstdint>
#include <random>

namespace greedy {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

// Per-run seed derivation; run k of an experiment uses base_seed + k.
inline std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_index) {
    return base_seed + run_index;
}

// The jump clock draws from its own stream so that the visited configuration
// sequence is a function of the seed alone, independent of the clock mode.
inline Rng make_clock_rng(std::uint64_t seed) {
    return Rng{seed ^ 0x9e3779b97f4a7c15ULL};
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>{lo, hi}(rng);
}

}  // namespace greedy
