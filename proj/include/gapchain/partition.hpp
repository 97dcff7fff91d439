#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gapchain {

enum class Provenance { formula, override_value };

const char* to_string(Provenance p);

/// Optional per-field replacements for the formula values. Supplying any of
/// them switches derive_parameters into toy mode.
struct ParamOverrides {
  std::optional<double> y;
  std::optional<double> z;
  std::optional<double> small_low;
  std::optional<double> small_high;
  std::optional<std::uint64_t> r;
  std::optional<double> epsilon;
  std::optional<double> C_target;

  bool any() const;
};

/// Scale parameters of the construction, all derived from x.
///
///   y = c x log x log_3 x / log_2 x         (sieved interval is (x, y])
///   z = x^(log_3 x / (4 log_2 x))           (smoothness bound)
///   u = log y / log z
///   r = max(r0, floor(log^c0 x))            (tuple length)
///   small window (log^20 x, z]              (home of S)
///   sigma = prod over primes s in the small window of (1 - 1/s)
///
/// At any x a desk can handle the small window is empty, so experiments
/// override it (and usually y) and the provenance map says which fields did
/// not come from a formula.
struct Params {
  double x = 0;
  double c = 0.1;
  double A = 4;
  double epsilon = 0;
  double c0 = 0.25;
  std::uint64_t r0 = 1;

  double y = 0;
  double z = 0;
  double u = 0;
  std::uint64_t r = 1;
  double small_low = 0;
  double small_high = 0;
  double sigma = 1;
  double C_target = 0;

  std::map<std::string, Provenance> provenance;

  bool toy() const;
};

struct DeriveOptions {
  double c0 = 0.25;
  std::uint64_t r0 = 1;
};

/// Throws DomainError naming the log iterate that is undefined when a formula
/// needs it. Formula mode (no overrides) requires x > e^(e^e); toy mode
/// requires x >= 16.
Params derive_parameters(double x, double c, double A, const ParamOverrides& overrides = {},
                         const DeriveOptions& options = {});

/// The three disjoint prime sets
///   S = primes in (small_low, small_high], P = primes in (x/2, x],
///   Q = primes in (x, y], each with B0 removed.
struct PrimePartition {
  Params params;
  std::uint64_t x = 0;  ///< floor(params.x)
  std::uint64_t y = 0;  ///< floor(params.y)
  std::uint64_t B0 = 1;
  std::vector<std::uint64_t> S;
  std::vector<std::uint64_t> P;
  std::vector<std::uint64_t> Q;
  double sigma = 1;  ///< Mertens density of S
  std::vector<std::string> warnings;

  /// z as an integer smoothness bound (floor, at least 1).
  std::uint64_t z_floor() const;
  bool in_S(std::uint64_t p) const;
  bool in_P(std::uint64_t p) const;
  bool in_Q(std::uint64_t q) const;
};

PrimePartition build_partition(const Params& params, std::uint64_t B0 = 1);

/// Re-checks range membership and pairwise disjointness; throws Error on any
/// violation.
void check_partition(const PrimePartition& partition);

}  // namespace gapchain
