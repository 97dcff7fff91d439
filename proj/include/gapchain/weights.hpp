#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gapchain/partition.hpp"
#include "gapchain/rng.hpp"

namespace gapchain {

/// Distinct shifts h_1 < ... < h_r that miss a residue class modulo every prime.
struct AdmissibleTuple {
  std::vector<std::int64_t> h;

  std::size_t r() const { return h.size(); }
  /// h_i in [0, 2 r^2] for every i.
  bool within_square_range() const;
};

/// The first r primes larger than r; admissibility is checked before return.
AdmissibleTuple first_primes_tuple(std::uint64_t r);

/// True iff for every prime p <= h.size() the residues h_i mod p miss a class.
/// Larger primes cannot be covered by h.size() residues.
bool is_admissible(std::span<const std::int64_t> h);

enum class WeightKind { uniform, maynard };

const char* to_string(WeightKind k);
WeightKind weight_kind_from_string(const std::string& s);

struct WeightOptions {
  WeightKind kind = WeightKind::maynard;
  double theta = 0.25;      ///< sieve level R = x^theta
  std::uint64_t r_cap = 16;  ///< largest tuple length accepted
  unsigned threads = 1;
};

/// One divisor tuple (d_1..d_r) of the Maynard-style weight with its
/// coefficient lambda = prod mu(d_i) * F(sum log d_i / log R).
struct DivisorTuple {
  std::vector<std::uint64_t> d;
  double lambda = 0;
};

/// All tuples with prod d_i < R squarefree and coprime to the primes <= r and
/// to B0. F(t) = max(1 - t, 0)^r.
std::vector<DivisorTuple> maynard_divisor_tuples(std::size_t r, double R, std::uint64_t B0);

/// Sparse weights w(p, .) for one p, sorted by n.
struct WeightRow {
  std::uint64_t p = 0;
  std::vector<std::int64_t> n;
  std::vector<double> w;
  std::vector<double> cumulative;  ///< running sums of w, for sampling
  double sum = 0;                  ///< compensated sum of w
  double sum_error_bound = 0;      ///< bound on |sum - exact sum|

  /// w(p, n), zero off the support.
  double weight(std::int64_t at) const;
};

/// Nonnegative weights on P x [-y, y].
///
/// Every row p is supported on the window of n with n + h_i p in (x, y] for
/// all i, taken as n + h_1 p in (x, x + L] with one common length L for all
/// p, restricted to n for which every n + h_i p is coprime to the primes
/// <= r. The divisor sums defining the Maynard kind never involve those
/// primes, so this is where their local conditions are imposed.
class WeightTable {
 public:
  WeightKind kind() const { return kind_; }
  double theta() const { return theta_; }
  double level() const { return level_; }
  const AdmissibleTuple& tuple() const { return tuple_; }
  std::uint64_t x() const { return x_; }
  std::uint64_t y() const { return y_; }
  std::uint64_t B0() const { return B0_; }
  std::uint64_t window_length() const { return window_length_; }
  std::uint64_t local_modulus() const { return local_modulus_; }
  std::size_t divisor_tuple_count() const { return divisor_tuples_; }

  const std::vector<WeightRow>& rows() const { return rows_; }
  /// Throws InvalidInput if p is not a row of the table.
  const WeightRow& row(std::uint64_t p) const;
  /// P(n~_p = n) = w(p, n) / sum_n' w(p, n').
  double probability(std::uint64_t p, std::int64_t n) const;

 private:
  friend WeightTable build_weights(const PrimePartition&, const AdmissibleTuple&, const WeightOptions&);

  WeightKind kind_ = WeightKind::uniform;
  double theta_ = 0;
  double level_ = 0;
  AdmissibleTuple tuple_;
  std::uint64_t x_ = 0;
  std::uint64_t y_ = 0;
  std::uint64_t B0_ = 1;
  std::uint64_t window_length_ = 0;
  std::uint64_t local_modulus_ = 1;
  std::size_t divisor_tuples_ = 0;
  std::vector<WeightRow> rows_;
};

/// Throws InvalidInput for theta <= 0, an empty P, a tuple longer than r_cap
/// or a tuple too wide for (x, y].
WeightTable build_weights(const PrimePartition& partition, const AdmissibleTuple& tuple,
                          const WeightOptions& options = {});

struct ContractOptions {
  std::size_t q_samples = 512;  ///< stratified q sample for the per-q sums
  std::size_t h_samples = 64;   ///< cap on off-tuple shifts examined
};

/// Normalized (row-sum relative) measurements of the four weight contracts.
struct ContractReport {
  // (a) row sums across p
  double row_sum_min = 0;
  double row_sum_max = 0;
  double row_sum_mean = 0;
  double row_sum_max_over_min = 0;
  double row_sum_dispersion = 0;  ///< (max - min) / mean
  // (b) S(q, i) = sum_p P(n~_p = q - h_i p)
  std::size_t q_sampled = 0;
  double tuple_sum_mean = 0;
  double tuple_sum_min = 0;
  double tuple_sum_max = 0;
  double tuple_sum_cv = 0;
  double u_empirical = 0;  ///< (2y/x) * r * mean S(q, i)
  // (c) A(h) = sum_q sum_p P(n~_p = q - h p), off-tuple vs on-tuple
  double on_tuple_scale = 0;  ///< mean_i A(h_i)
  std::size_t off_tuple_shifts = 0;
  double off_tuple_max_ratio = 0;
  double off_tuple_mean_ratio = 0;
  std::int64_t off_tuple_worst_h = 0;
  // (d) max point mass
  double max_point_mass = 0;
  bool has_point_mass_row = false;
  // row sums recomputed from scratch vs stored
  double max_row_sum_relative_error = 0;
};

ContractReport weight_contract_report(const WeightTable& table, const PrimePartition& partition,
                                      const ContractOptions& options = {});

/// One draw of n~_p. Throws InvalidInput for a zero row or unknown p.
std::int64_t sample_n_tilde(const WeightTable& table, std::uint64_t p, Engine& rng);

/// Neumaier-compensated sum with an a-posteriori error bound.
struct CompensatedSum {
  double value = 0;
  double error_bound = 0;
};
CompensatedSum compensated_sum(std::span<const double> terms);

}  // namespace gapchain
