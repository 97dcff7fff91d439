#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gapchain/partition.hpp"

namespace gapchain {

/// One forbidden residue class a_p mod p per sieving prime, never using the
/// excluded prime B0.
class ResidueSystem {
 public:
  explicit ResidueSystem(std::uint64_t B0 = 1) : excluded_(B0) {}

  /// Sets the class for p, reducing `a` mod p. Throws InvalidInput if p is not
  /// prime or equals the excluded prime.
  void set(std::uint64_t p, std::int64_t a);
  std::optional<std::uint64_t> class_of(std::uint64_t p) const;

  const std::map<std::uint64_t, std::uint64_t>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t excluded() const { return excluded_; }

  /// True if n avoids every class in the system.
  bool admits(std::uint64_t n) const;

  friend bool operator==(const ResidueSystem&, const ResidueSystem&) = default;

 private:
  std::uint64_t excluded_;
  std::map<std::uint64_t, std::uint64_t> entries_;
};

/// Membership bit-set over the integer interval (lo, hi], addressed by offset
/// n - lo - 1. The cardinality is maintained on every mutation.
class SievedSet {
 public:
  SievedSet() = default;
  /// All of (lo, hi] present.
  SievedSet(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::uint64_t length() const { return hi_ - lo_; }
  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(std::uint64_t n) const;
  /// Removes n if present; returns whether it was.
  bool remove(std::uint64_t n);
  /// Removes every member congruent to a mod p; returns how many went.
  std::uint64_t remove_class(std::uint64_t p, std::uint64_t a);

  /// Members in [a, b] (clamped to the interval).
  std::uint64_t count_in(std::uint64_t a, std::uint64_t b) const;
  std::vector<std::uint64_t> members() const;
  /// Maximal runs of consecutive members as (first, length).
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs() const;
  /// Full popcount, independent of the maintained counter.
  std::uint64_t recount() const;

  template <class F>
  void for_each(F&& visit) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        visit(lo_ + 1 + w * 64 + static_cast<std::uint64_t>(b));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const SievedSet& a, const SievedSet& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.words_ == b.words_;
  }

 private:
  friend SievedSet sift_interval(std::uint64_t, std::uint64_t, const ResidueSystem&, unsigned);

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

/// {n in (lo, hi] : n != a_p (mod p) for all p in the system}. With threads > 1
/// the interval is split on word boundaries; the result is identical.
SievedSet sift_interval(std::uint64_t lo, std::uint64_t hi, const ResidueSystem& system, unsigned threads = 1);

/// Classes a_s mod s over the small primes S, index-aligned with `primes`.
struct SmallClassVector {
  std::vector<std::uint64_t> primes;
  std::vector<std::uint64_t> residues;

  std::size_t size() const { return primes.size(); }
};

bool sifted_membership(std::int64_t n, const SmallClassVector& abar);

/// Shifts n_p for p in P.
using LargeShiftMap = std::map<std::uint64_t, std::int64_t>;

/// a_s from abar on S, a_p = n_p mod p on P, a_p = 0 for every other prime
/// p <= x, p != B0.
ResidueSystem assemble_full_system(const SmallClassVector& abar, const LargeShiftMap& nbar,
                                   const PrimePartition& partition);

struct ResidualReport {
  std::vector<std::uint64_t> R;          ///< members of T that are not primes of Q
  std::uint64_t q_primes = 0;            ///< members of T that are primes of Q
  std::uint64_t smooth_members = 0;      ///< R members that are smooth times a power of B0
  std::vector<std::uint64_t> offenders;  ///< R members that are not
  std::uint64_t smooth_bound = 0;        ///< the smoothness bound used (top of the S window)
  double bound = 0;                      ///< log x * y * exp(-u log u)
  double u = 0;
  bool dichotomy_holds = true;
};

struct ResidualOptions {
  /// Throw when an R member is neither smooth-times-B0-power nor a Q prime.
  /// Toy windows with small S primes legitimately produce such members.
  bool strict = true;
};

ResidualReport residual_smooth_set(const SievedSet& T, const PrimePartition& partition,
                                   const ResidualOptions& options = {});

/// Deterministic Erdos-Rankin baseline. Class 0 for every prime <= x outside
/// S, P and the medium set; then, in ascending order over S, the medium
/// primes and P, the class that removes the most current survivors of (x, y]
/// (ties to the smallest class).
ResidueSystem greedy_rankin(const PrimePartition& partition, const std::vector<std::uint64_t>& medium_primes);

/// Short-interval shape check: #(T in [alpha y, beta y]) <= K (|beta - alpha| + eps) #T.
struct ShortIntervalReport {
  double epsilon = 0;
  double K = 0;
  double worst_ratio = 0;  ///< max over windows of count / ((|beta-alpha| + eps) #T)
  double worst_alpha = 0;
  double worst_beta = 0;
  double size_ratio = 0;   ///< (#T log x) / (A x)
  bool passed = true;
};

/// Checks every window [k eps, (k+1) eps] y and the full window [0, 1] y.
ShortIntervalReport short_interval_report(const SievedSet& T, const PrimePartition& partition, double K,
                                          double epsilon);

}  // namespace gapchain
