#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gapchain {

/// The generator every sampler takes by reference. mt19937_64 output is fixed
/// by the standard; the helpers below avoid the implementation-defined
/// std::*_distribution types so seeded runs replay identically everywhere.
using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based substream derivation: the seed for (root, tag, index) is a
/// pure function of its inputs, so work split across threads or reordered
/// still draws the same numbers.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index = 0);

inline Engine make_engine(std::uint64_t root, std::string_view tag, std::uint64_t index = 0) {
  return Engine(derive_seed(root, tag, index));
}

/// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Engine& rng);

}  // namespace gapchain
