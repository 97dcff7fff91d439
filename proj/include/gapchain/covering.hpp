#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gapchain/rng.hpp"

namespace gapchain {

enum class CoverProfile { poisson, fixed_size };

std::string to_string(CoverProfile profile);
CoverProfile cover_profile_from_string(const std::string& name);

/// Elements are 0..N-1, "primes" are 0..P_count-1. Each e_p is an independent
/// draw; under `poisson` every q is included with probability C / P_count,
/// under `fixed_size` e_p is a uniform subset of size round(N C / P_count).
struct CoveringInstance {
  std::uint32_t N = 0;
  std::uint32_t P_count = 0;
  CoverProfile profile = CoverProfile::poisson;
  double C = 0;
  double delta = 0;  ///< sup P(q in e_p)
  double kappa = 0;
  std::uint32_t r_cap = 0;

  double inclusion_probability() const { return C / P_count; }
  double expected_edge_size() const { return static_cast<double>(N) * C / P_count; }
};

struct SynthOptions {
  CoverProfile profile = CoverProfile::poisson;
  std::uint32_t r_cap = 0;   ///< 0: max(16, 4 * expected edge size)
  double delta_max = 1.0;    ///< required bound on C / P_count
  double coverage_per_round = 0.0;  ///< 0: log 5
};

/// C = m * coverage_per_round. Throws InvalidInput if C / P_count > delta_max.
CoveringInstance synth_instance(std::uint32_t N, std::uint32_t P_count, std::uint32_t m, const SynthOptions& options = {});

/// One draw of e_p, sorted. Sets `truncated` when the raw draw exceeded r_cap
/// and was subsampled uniformly down to r_cap.
std::vector<std::uint32_t> draw_edge(const CoveringInstance& instance, Engine& rng, bool* truncated = nullptr);

struct CoverageEstimate {
  std::size_t draws = 0;
  double mean = 0;
  double standard_error = 0;
};

/// Monte Carlo estimate of sum_p P(q in e_p) for one q from `draws` full
/// families, each p on its own substream.
CoverageEstimate estimate_coverage(const CoveringInstance& instance, std::uint32_t q, std::size_t draws,
                                   std::uint64_t seed);

struct CoverResult {
  std::uint32_t rounds = 0;
  std::vector<std::vector<std::uint32_t>> blocks;   ///< p indices per round
  std::vector<std::vector<std::uint32_t>> eprime;   ///< indexed by p, sorted
  std::vector<std::uint32_t> leftover;              ///< sorted
  std::vector<std::size_t> survivors_after_round;
  std::size_t truncations = 0;
  std::uint64_t seed = 0;
};

struct NibbleOptions {
  unsigned threads = 1;
};

/// Random equal blocks, then per round e'_p = e_p cap W_{j-1}. The block
/// permutation uses `rng`; each e_p is drawn from substream ("edge", p) of a
/// root seed taken from `rng`, so thread count does not affect the result.
CoverResult nibble_cover(const CoveringInstance& instance, std::uint32_t m, Engine& rng, const NibbleOptions& options = {});

/// #(leftover cap Qsub). Throws InvalidInput if Qsub is not within 0..N-1.
std::size_t subset_leftover(const CoverResult& result, std::span<const std::uint32_t> Qsub, std::uint32_t N);

/// Set-algebra checks: e'_p within W_{j-1}, leftover disjoint from every e'_p,
/// leftover equal to the complement of the union. Empty string when sound.
std::string check_cover(const CoveringInstance& instance, const CoverResult& result);

/// `size` distinct elements of 0..N-1, sorted.
std::vector<std::uint32_t> random_subset(std::uint32_t N, std::uint32_t size, Engine& rng);

}  // namespace gapchain
