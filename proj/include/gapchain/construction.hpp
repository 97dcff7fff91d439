#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "gapchain/interval_sieve.hpp"
#include "gapchain/partition.hpp"
#include "gapchain/rng.hpp"
#include "gapchain/weights.hpp"

namespace gapchain {

/// Independent uniform classes a_s mod s for every s in S.
SmallClassVector sample_small_classes(std::span<const std::uint64_t> S, Engine& rng);

struct SurvivalProbability {
  mpq_class exact{1};
  double value = 1;
};

/// P(n_1, ..., n_t all avoid a uniform random class vector over S), which is
/// prod_s (1 - #{n_i mod s} / s). Throws InvalidInput on duplicate points.
SurvivalProbability correlation_probability(std::span<const std::int64_t> points, std::span<const std::uint64_t> S);

/// X_p(a) = sum_n P(n~_p = n) 1{n + h_j p in S(a) for all j}, summed exactly
/// over the sparse row.
double compute_Xp(const SmallClassVector& abar, const WeightTable& weights, std::uint64_t p);

/// Z_p(a; n) = 1{n + h_j p in S(a) for all j} P(n~_p = n).
double z_mass(const SmallClassVector& abar, const WeightTable& weights, std::uint64_t p, std::int64_t n);

struct ConstructionOptions {
  double eta = 0.1;  ///< good-set tolerance on |X_p / sigma^r - 1|
  std::uint64_t seed = 0;
};

/// One draw of the random construction. `good` and `Xp` are index-aligned
/// with partition->P; n_p = 0 off the good set.
struct ConstructionRun {
  std::shared_ptr<const PrimePartition> partition;
  std::shared_ptr<const WeightTable> weights;
  SmallClassVector abar;
  std::vector<double> Xp;
  std::vector<char> good;
  LargeShiftMap npbar;
  std::uint64_t seed = 0;
  double eta = 0.1;
  double sigma = 1;
  double sigma_r = 1;

  std::size_t good_count() const;
  bool is_good(std::uint64_t p) const;
  double X(std::uint64_t p) const;
};

/// Draws a (substream "abar"), computes every X_p, selects the good set and
/// draws each n_p from its own substream ("np", p).
ConstructionRun run_construction(std::shared_ptr<const PrimePartition> partition,
                                 std::shared_ptr<const WeightTable> weights, const ConstructionOptions& options);

/// The primes p with |X_p sigma^-r - 1| <= eta.
std::vector<std::uint64_t> select_good_P(const ConstructionRun& run);

/// The law Z_p(a; .) / X_p(a) as a support list with running masses.
struct ConditionalLaw {
  std::vector<std::int64_t> support;
  std::vector<double> cumulative;
};

ConditionalLaw conditional_law(const ConstructionRun& run, std::uint64_t p);
std::int64_t draw(const ConditionalLaw& law, Engine& rng);

/// A draw from Z_p(a; .) / X_p(a); returns 0 for p outside the good set.
std::int64_t sample_np(const ConstructionRun& run, std::uint64_t p, Engine& rng);

struct NormalizationReport {
  std::size_t rows_checked = 0;
  double max_relative_error = 0;  ///< max_p |sum_n Z_p(a; n) - X_p(a)| / X_p(a)
};

/// Recomputes sum_n Z_p(a; n) by a dense scan of every n in each row's window
/// and compares it with the stored X_p.
NormalizationReport check_normalization(const ConstructionRun& run);

struct GoodnessOptions {
  std::size_t q_samples = 512;
};

/// Per-q split of sigma^-r sum_{p good} sum_h Z_p(a; q - h p) into the tuple
/// shifts (main part) and every other |h| <= y/x (error part).
struct GoodnessReport {
  std::size_t q_population = 0;  ///< #(Q intersect S(a))
  std::size_t q_sampled = 0;
  double C_target = 0;
  double main_mean = 0;
  double main_min = 0;
  double main_max = 0;
  double main_cv = 0;
  double main_over_target = 0;
  double error_mean = 0;
  double error_max = 0;
  double fraction_error_above_tenth = 0;  ///< share of q with error > main / 10
  std::size_t good_count = 0;
  double good_complement_fraction = 0;
  std::vector<std::uint64_t> q;
  std::vector<double> main;
  std::vector<double> error;
};

/// q sample: every ceil(#(Q cap S(a)) / q_samples)-th surviving q.
GoodnessReport goodness_report(const ConstructionRun& run, double C_target, const GoodnessOptions& options = {});

}  // namespace gapchain
