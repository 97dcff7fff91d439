#include "gapchain/rng.hpp"

#include "gapchain/error.hpp"

namespace gapchain {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index) {
  // FNV-1a over the tag, then three splitmix rounds mixing root, tag and index.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::uint64_t state = root;
  std::uint64_t a = splitmix64(state);
  state = a ^ h;
  std::uint64_t b = splitmix64(state);
  state = b ^ index;
  return splitmix64(state);
}

std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("uniform_below: bound must be positive");
  // Rejection on the top multiple of bound.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace gapchain
