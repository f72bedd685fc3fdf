#pragma once

// Platform-independent random draws. std::uniform_real_distribution is
// implementation-defined, so sweeps use these helpers on top of mt19937_64,
// whose output sequence is fixed by the standard.

#include <cstdint>
#include <random>

namespace coeffid {

using Rng = std::mt19937_64;

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Independent stream for task `index` of a sweep seeded with `seed`.
inline Rng task_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace coeffid
