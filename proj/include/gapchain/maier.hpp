#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapchain/bignat.hpp"
#include "gapchain/interval_sieve.hpp"
#include "gapchain/partition.hpp"
#include "gapchain/primality.hpp"
#include "gapchain/rng.hpp"

namespace gapchain {

/// Rows zP + m + (x, y]. m solves m = -a_p (mod p) for every p in the system,
/// reduced to [0, P); with all a_p = 0 this gives m = 0.
struct MaierFrame {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t B0 = 1;
  BigNat P;
  BigNat m;
  unsigned D = 1;
  ResidueSystem system;
};

/// P(x) / B0 for B0 = 1 or a prime.
BigNat primorial_over(std::uint64_t x, std::uint64_t B0);

/// Throws InvalidInput unless the system covers exactly the primes <= x other
/// than B0.
MaierFrame assemble_frame(const ResidueSystem& system, const PrimePartition& partition, unsigned D = 1);

struct SoundnessReport {
  std::size_t checked = 0;
  std::optional<std::uint64_t> failure;  ///< a t outside T with gcd(m + t, P) = 1
};

/// gcd(m + t, P) > 1 for up to `samples` random t in (x, y] \ T (all of them
/// when the complement is smaller).
SoundnessReport frame_soundness(const MaierFrame& frame, const SievedSet& T, std::size_t samples, Engine& rng);

/// Uniform in [0, bound).
mpz_class uniform_big_below(Engine& rng, const mpz_class& bound);

struct MaierOptions {
  std::size_t max_bits = 4096;  ///< budget on the bit length of zP + m + y
  unsigned threads = 1;
  std::size_t pair_samples = 32;
  PrimalityPolicy policy{};
};

struct PairHit {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  double frequency = 0;
};

struct RowStatistics {
  std::size_t trials = 0;
  std::size_t z_bits = 0;
  double mean_N = 0;
  double var_N = 0;
  double singleton_rate = 0;  ///< mean over a in T of the hit frequency
  std::vector<std::pair<std::uint64_t, double>> per_a;
  std::vector<PairHit> pairs;
  double pair_mean = 0;
  /// pair_mean / singleton_rate^2; 0 when undefined.
  double pair_ratio = 0;
};

/// z uniform in [1, P^D] from substream ("row", i) of a root drawn from rng.
RowStatistics sample_rows(const MaierFrame& frame, const SievedSet& T, std::size_t trials, Engine& rng,
                          const MaierOptions& options = {});

enum class EvidenceKind { gcd_with_P, trial_factor, mr_witness };

std::string to_string(EvidenceKind kind);
EvidenceKind evidence_kind_from_string(const std::string& name);

/// Proof that zP + m + offset is composite: a common factor with P, an
/// explicit factor, or a strong-pseudoprime base it fails.
struct CompositeEvidence {
  std::uint64_t offset = 0;
  EvidenceKind kind = EvidenceKind::gcd_with_P;
  BigNat value;
};

struct GapChainCertificate {
  int version = 1;
  std::string library_version;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t B0 = 1;
  unsigned D = 1;
  BigNat P;
  BigNat m;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> classes;  ///< (p, a_p)
  BigNat z;
  unsigned k = 1;
  double epsilon = 0;
  std::vector<std::uint64_t> prime_offsets;  ///< ascending, k + 1 of them
  std::vector<CompositeEvidence> evidence;   ///< ascending offsets
  std::uint64_t min_gap = 0;
  std::uint64_t seed = 0;
  PrimalityPolicy policy{};
  /// Union bound on the chance that a probably-prime listing is wrong.
  double error_budget = 0;
};

std::string certificate_to_json(const GapChainCertificate& cert);
/// Throws InvalidInput on malformed documents.
GapChainCertificate certificate_from_json(const std::string& text);

struct ChainMiss {
  std::size_t trials = 0;
  std::optional<BigNat> best_z;
  std::size_t best_prime_count = 0;
  std::uint64_t best_min_gap = 0;  ///< best k-gap minimum among rows with >= k+1 primes
  std::uint64_t required_gap = 0;
};

struct ChainSearch {
  std::optional<GapChainCertificate> certificate;
  ChainMiss miss;
  std::size_t trials_used = 0;
};

/// Scans up to `trials` rows (substream ("chain-row", i)) for k + 1
/// consecutive row primes whose k gaps are all >= epsilon * y. Rows are
/// examined in index order, so the first hit does not depend on threads.
ChainSearch find_gap_chain(const MaierFrame& frame, const SievedSet& T, unsigned k, double epsilon,
                           std::size_t trials, Engine& rng, const MaierOptions& options = {});

struct Verification {
  bool accepted = false;
  std::string reason;
};

/// Recomputes everything from the snapshot; rejects with the first failure.
Verification verify_certificate(const GapChainCertificate& cert);

/// The three canonical tamperings: a listed offset moved by delta, one
/// evidence item removed, min_gap raised.
GapChainCertificate tamper_shift_prime(GapChainCertificate cert, std::size_t index, std::int64_t delta = 2);
GapChainCertificate tamper_drop_evidence(GapChainCertificate cert, std::size_t index);
GapChainCertificate tamper_inflate_gap(GapChainCertificate cert, std::uint64_t by = 1);

/// max over p_{n+k} <= X of min(p_{n+1} - p_n, ..., p_{n+k} - p_{n+k-1}).
/// Requires X <= 10^8; throws DomainError when fewer than k + 1 primes are <= X.
std::uint64_t gk_direct(std::uint64_t X, unsigned k);

}  // namespace gapchain
