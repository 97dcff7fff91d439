#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "gapchain/bignat.hpp"

namespace gapchain {

/// Below this bound, strong-pseudoprime tests to the first 13 prime bases
/// (2, 3, ..., 41) decide primality exactly (Sorenson and Webster, 2015).
inline constexpr const char* kDeterministicBound = "3317044064679887385961981";

struct PrimalityPolicy {
  /// Miller-Rabin rounds used above kDeterministicBound. Each round has error
  /// probability at most 1/4.
  unsigned rounds = 32;
};

enum class Verdict { prime, composite, probably_prime };

const char* to_string(Verdict v);

/// How a composite verdict was reached. `unit` covers 0 and 1.
enum class CompositeReason { none, unit, trial_factor, mr_witness };

struct PrimalityResult {
  Verdict verdict = Verdict::composite;
  CompositeReason reason = CompositeReason::none;
  /// Nontrivial divisor (trial_factor) or the strong-pseudoprime base that
  /// failed (mr_witness).
  std::optional<BigNat> evidence;
  /// Index of the failing round for mr_witness.
  unsigned failed_round = 0;
  /// Rounds performed in the probabilistic regime; 0 when deterministic.
  unsigned rounds = 0;
  /// Upper bound on the probability that a probably_prime verdict is wrong.
  double error_bound = 0.0;

  bool is_prime_like() const { return verdict != Verdict::composite; }
};

PrimalityResult is_prime(const BigNat& n, const PrimalityPolicy& policy = {});

/// Exact test for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// True if n (odd, > 3) is a strong probable prime to base a.
bool strong_probable_prime(const mpz_class& n, const mpz_class& a);

/// The i-th probabilistic base for n; a pure function of (n, i) so verifiers
/// replay the same rounds.
mpz_class probabilistic_base(const mpz_class& n, unsigned round);

}  // namespace gapchain
