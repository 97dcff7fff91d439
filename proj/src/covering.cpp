#include "gapchain/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_set>

#include "gapchain/error.hpp"

namespace gapchain {

std::string to_string(CoverProfile profile) { return profile == CoverProfile::poisson ? "poisson" : "fixed-size"; }

CoverProfile cover_profile_from_string(const std::string& name) {
  if (name == "poisson") return CoverProfile::poisson;
  if (name == "fixed-size" || name == "fixed_size") return CoverProfile::fixed_size;
  throw InvalidInput("unknown covering profile '" + name + "'");
}

CoveringInstance synth_instance(std::uint32_t N, std::uint32_t P_count, std::uint32_t m, const SynthOptions& options) {
  if (N < 10) throw InvalidInput("synth_instance: N must be at least 10");
  if (m < 1) throw InvalidInput("synth_instance: m must be positive");
  if (P_count < m) throw InvalidInput("synth_instance: P_count must be at least m");
  CoveringInstance inst;
  inst.N = N;
  inst.P_count = P_count;
  inst.profile = options.profile;
  const double per_round = options.coverage_per_round > 0 ? options.coverage_per_round : std::log(5.0);
  inst.C = m * per_round;
  inst.delta = inst.C / P_count;
  if (inst.delta > options.delta_max || inst.delta > 1.0) {
    throw InvalidInput("synth_instance: C / P_count = " + std::to_string(inst.delta) + " exceeds the sparsity target");
  }
  inst.kappa = 0;
  inst.r_cap = options.r_cap != 0
                   ? options.r_cap
                   : std::max<std::uint32_t>(16, static_cast<std::uint32_t>(std::ceil(4 * inst.expected_edge_size())));
  return inst;
}

namespace {

// Floyd's algorithm: k distinct values from 0..n-1.
std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k, Engine& rng) {
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k * 2);
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::uint32_t j = n - k; j < n; ++j) {
    auto t = static_cast<std::uint32_t>(uniform_below(rng, std::uint64_t{j} + 1));
    if (!chosen.insert(t).second) {
      chosen.insert(j);
      t = j;
    }
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::uint32_t> random_subset(std::uint32_t N, std::uint32_t size, Engine& rng) {
  if (size > N) throw InvalidInput("random_subset: size exceeds N");
  return sample_distinct(N, size, rng);
}

std::vector<std::uint32_t> draw_edge(const CoveringInstance& instance, Engine& rng, bool* truncated) {
  std::uint32_t k = 0;
  if (instance.profile == CoverProfile::poisson) {
    std::binomial_distribution<std::uint32_t> size(instance.N, instance.inclusion_probability());
    k = size(rng);
  } else {
    k = static_cast<std::uint32_t>(std::llround(instance.expected_edge_size()));
  }
  k = std::min(k, instance.N);
  // Given its size, a Bernoulli family is a uniform subset; subsampling a
  // uniform subset to r_cap is again uniform, so truncation is a size clamp.
  const bool cut = k > instance.r_cap;
  if (truncated) *truncated = cut;
  if (cut) k = instance.r_cap;
  return sample_distinct(instance.N, k, rng);
}

CoverageEstimate estimate_coverage(const CoveringInstance& instance, std::uint32_t q, std::size_t draws,
                                   std::uint64_t seed) {
  if (q >= instance.N) throw InvalidInput("estimate_coverage: q out of range");
  if (draws < 2) throw InvalidInput("estimate_coverage: need at least two draws");
  double sum = 0;
  double sum_sq = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    double hits = 0;
    const auto draw_seed = derive_seed(seed, "coverage-draw", d);
    for (std::uint32_t p = 0; p < instance.P_count; ++p) {
      Engine rng = make_engine(draw_seed, "edge", p);
      auto e = draw_edge(instance, rng);
      if (std::binary_search(e.begin(), e.end(), q)) hits += 1;
    }
    sum += hits;
    sum_sq += hits * hits;
  }
  CoverageEstimate est;
  est.draws = draws;
  const double n = static_cast<double>(draws);
  est.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1));
  est.standard_error = std::sqrt(var / n);
  return est;
}

CoverResult nibble_cover(const CoveringInstance& instance, std::uint32_t m, Engine& rng, const NibbleOptions& options) {
  if (m < 1) throw InvalidInput("nibble_cover: m must be positive");
  if (instance.P_count < m) throw InvalidInput("nibble_cover: empty block (P_count < m)");
  CoverResult res;
  res.rounds = m;
  res.seed = rng();

  std::vector<std::uint32_t> perm(instance.P_count);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
  }
  res.blocks.resize(m);
  for (std::uint32_t j = 0; j < m; ++j) {
    const std::size_t lo = static_cast<std::size_t>(instance.P_count) * j / m;
    const std::size_t hi = static_cast<std::size_t>(instance.P_count) * (j + 1) / m;
    if (lo == hi) throw InvalidInput("nibble_cover: empty block");
    res.blocks[j].assign(perm.begin() + lo, perm.begin() + hi);
    std::sort(res.blocks[j].begin(), res.blocks[j].end());
  }

  std::vector<char> alive(instance.N, 1);
  res.eprime.assign(instance.P_count, {});
  const unsigned threads = std::max(1u, options.threads);
  for (std::uint32_t j = 0; j < m; ++j) {
    const auto& block = res.blocks[j];
    std::vector<std::vector<std::uint32_t>> edges(block.size());
    std::vector<char> cut(block.size(), 0);
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        Engine erng = make_engine(res.seed, "edge", block[i]);
        bool t = false;
        edges[i] = draw_edge(instance, erng, &t);
        cut[i] = t;
      }
    };
    if (threads == 1 || block.size() < 2 * threads) {
      work(0, block.size());
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(work, block.size() * t / threads, block.size() * (t + 1) / threads);
      }
    }
    // Intersections use W_{j-1}; removal happens after the whole block.
    for (std::size_t i = 0; i < block.size(); ++i) {
      auto& ep = res.eprime[block[i]];
      for (auto q : edges[i]) {
        if (alive[q]) ep.push_back(q);
      }
      res.truncations += cut[i];
    }
    for (auto p : block) {
      for (auto q : res.eprime[p]) alive[q] = 0;
    }
    res.survivors_after_round.push_back(static_cast<std::size_t>(std::count(alive.begin(), alive.end(), 1)));
  }
  for (std::uint32_t q = 0; q < instance.N; ++q) {
    if (alive[q]) res.leftover.push_back(q);
  }
  return res;
}

std::size_t subset_leftover(const CoverResult& result, std::span<const std::uint32_t> Qsub, std::uint32_t N) {
  std::size_t count = 0;
  for (auto q : Qsub) {
    if (q >= N) throw InvalidInput("subset_leftover: element " + std::to_string(q) + " is outside Qset");
    if (std::binary_search(result.leftover.begin(), result.leftover.end(), q)) ++count;
  }
  return count;
}

std::string check_cover(const CoveringInstance& instance, const CoverResult& result) {
  std::vector<char> alive(instance.N, 1);
  for (std::uint32_t j = 0; j < result.rounds; ++j) {
    for (auto p : result.blocks[j]) {
      for (auto q : result.eprime[p]) {
        if (q >= instance.N) return "e'_" + std::to_string(p) + " leaves Qset";
        if (!alive[q]) return "e'_" + std::to_string(p) + " contains " + std::to_string(q) + " outside W_{j-1}";
      }
    }
    for (auto p : result.blocks[j]) {
      for (auto q : result.eprime[p]) alive[q] = 0;
    }
  }
  std::vector<std::uint32_t> expect;
  for (std::uint32_t q = 0; q < instance.N; ++q) {
    if (alive[q]) expect.push_back(q);
  }
  if (expect != result.leftover) return "leftover differs from the complement of the union of e'_p";
  return {};
}

}  // namespace gapchain
