#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "gapchain/bignat.hpp"
#include "gapchain/error.hpp"

namespace gapchain {

/// The primes up to and including `limit`, ascending.
struct PrimeList {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;

  std::size_t size() const { return primes.size(); }
  bool empty() const { return primes.empty(); }
  bool contains(std::uint64_t n) const;
  auto begin() const { return primes.begin(); }
  auto end() const { return primes.end(); }
};

PrimeList sieve_primes(std::uint64_t limit);

/// Primes in the half-open range (lo, hi], ascending. Segmented, so hi may be
/// far larger than the memory a full sieve would need.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

/// Calls `visit(p)` for every prime p in (lo, hi] in ascending order. Scans in
/// cache-sized segments; suitable for hi up to ~10^10.
void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& visit);

struct Congruence {
  BigNat residue;
  BigNat modulus;
};

struct CrtSolution {
  BigNat offset;   ///< in [0, modulus)
  BigNat modulus;  ///< product of the input moduli
};

/// Raised by crt_combine when two moduli share a factor.
class CrtError : public InvalidInput {
 public:
  CrtError(std::size_t first, std::size_t second, const std::string& what)
      : InvalidInput(what), first_(first), second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

CrtSolution crt_combine(std::span<const Congruence> congruences);

/// prod_{s in primes} (1 - 1/s), exactly and as a double.
struct MertensDensity {
  mpq_class exact{1};
  double value = 1.0;
};

MertensDensity mertens_density(std::span<const std::uint64_t> primes);

/// Iterated natural logarithms log x, log log x, ... up to `depth` (1..4).
struct LogIterates {
  std::array<double, 4> values{};
  int depth = 0;

  /// k-fold iterate, 1-based: at(1) = log x, at(2) = log log x.
  double at(int k) const;
};

/// Throws DomainError naming the first iterate that is undefined or not
/// positive.
LogIterates log_iterates(double x, int depth = 3);

struct SmoothCount {
  std::uint64_t exact = 0;  ///< #{1 <= n <= y : every prime factor <= z}; 1 counts
  double estimate = 0.0;    ///< y * exp(-u log u)
  double u = 0.0;           ///< log y / log z
};

SmoothCount smooth_count(std::uint64_t y, std::uint64_t z);

/// True if n, after dividing out every power of `extra` (1 = none), has all
/// prime factors <= bound.
bool is_smooth_times_power(std::uint64_t n, std::uint64_t bound, std::uint64_t extra);

}  // namespace gapchain
