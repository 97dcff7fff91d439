#include "gapchain/concentration.hpp"

#include <cmath>
#include <random>

#include "gapchain/error.hpp"
#include "gapchain/rng.hpp"

namespace gapchain {

ConcentrationReport concentration_check(const std::vector<DrawGroup>& groups, double theta) {
  if (groups.size() < 2) throw InvalidInput("concentration_check: need at least two groups");
  if (!(theta > 0)) throw InvalidInput("concentration_check: theta must be positive");
  ConcentrationReport rep;
  rep.groups = groups.size();
  rep.theta = theta;
  double sum = 0;
  double cross = 0;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidInput("concentration_check: empty group");
    for (const auto& d : g) {
      sum += d.f + d.f_prime;
      cross += d.f * d.f_prime;
      lo = std::min({lo, d.f, d.f_prime});
      hi = std::max({hi, d.f, d.f_prime});
      ++rep.draws;
    }
  }
  rep.alpha = sum / (2.0 * static_cast<double>(rep.draws));
  rep.second_moment = cross / static_cast<double>(rep.draws);
  rep.degenerate = lo == hi;
  if (rep.degenerate || rep.alpha == 0) {
    rep.epsilon = 0;
  } else {
    rep.epsilon = std::abs(rep.second_moment / (rep.alpha * rep.alpha) - 1.0);
  }
  rep.chebyshev_bound = std::isinf(theta) ? 0.0 : rep.epsilon * rep.alpha * rep.alpha / (theta * theta);
  if (!rep.degenerate) {
    for (const auto& g : groups) {
      double s = 0;
      for (const auto& d : g) s += d.f + d.f_prime;
      const double mean = s / (2.0 * static_cast<double>(g.size()));
      if (std::abs(mean - rep.alpha) > theta) ++rep.violations;
    }
  }
  rep.violation_frequency = static_cast<double>(rep.violations) / static_cast<double>(rep.groups);
  return rep;
}

std::vector<DrawGroup> synthetic_bernoulli_groups(double alpha, double epsilon, std::size_t groups,
                                                  std::size_t draws_per_group, std::uint64_t seed) {
  if (!(alpha > 0 && alpha < 1)) throw InvalidInput("synthetic_bernoulli_groups: alpha must lie in (0, 1)");
  if (!(epsilon > 0)) throw InvalidInput("synthetic_bernoulli_groups: epsilon must be positive");
  // Beta(a, b): mean alpha, variance alpha (1 - alpha) / (a + b + 1).
  const double nu = (1 - alpha) / (epsilon * alpha) - 1;
  if (!(nu > 0)) throw InvalidInput("synthetic_bernoulli_groups: epsilon too large for a Beta law at this alpha");
  std::vector<DrawGroup> out(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    Engine rng = make_engine(seed, "concentration-group", g);
    std::gamma_distribution<double> ga(alpha * nu, 1.0);
    std::gamma_distribution<double> gb((1 - alpha) * nu, 1.0);
    const double u = ga(rng);
    const double v = gb(rng);
    const double p = u / (u + v);
    out[g].resize(draws_per_group);
    for (auto& d : out[g]) {
      d.f = uniform01(rng) < p ? 1.0 : 0.0;
      d.f_prime = uniform01(rng) < p ? 1.0 : 0.0;
    }
  }
  return out;
}

}  // namespace gapchain
