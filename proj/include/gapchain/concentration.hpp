#pragma once

#include <cstdint>
#include <vector>

namespace gapchain {

/// F(X, Y) and F(X, Y') for one X with Y, Y' conditionally independent.
struct PairedDraw {
  double f = 0;
  double f_prime = 0;
};

using DrawGroup = std::vector<PairedDraw>;

struct ConcentrationReport {
  std::size_t groups = 0;
  std::size_t draws = 0;
  double theta = 0;
  double alpha = 0;          ///< mean of F
  double second_moment = 0;  ///< mean of F F'
  double epsilon = 0;        ///< |second_moment / alpha^2 - 1|
  std::size_t violations = 0;
  double violation_frequency = 0;  ///< share of groups with |group mean - alpha| > theta
  double chebyshev_bound = 0;      ///< epsilon alpha^2 / theta^2
  bool degenerate = false;         ///< F constant; treated as exact concentration
};

/// Needs at least two nonempty groups. theta may be +infinity.
ConcentrationReport concentration_check(const std::vector<DrawGroup>& groups, double theta);

/// Groups with p_X ~ Beta of mean alpha and variance epsilon alpha^2, then
/// F, F' ~ Bernoulli(p_X) independently, so E F = alpha and
/// E F F' = alpha^2 (1 + epsilon).
std::vector<DrawGroup> synthetic_bernoulli_groups(double alpha, double epsilon, std::size_t groups,
                                                  std::size_t draws_per_group, std::uint64_t seed);

}  // namespace gapchain
