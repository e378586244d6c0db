#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace deepcva::tensor {

using Rng = std::mt19937_64;

/// Deterministically derives an independent seed for a named stage, so every
/// consumer of randomness in a run hangs off the single user-supplied seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n) by rejection, independent of <random> distributions.
std::size_t uniform_index(Rng& rng, std::size_t n);

}  // namespace deepcva::tensor
