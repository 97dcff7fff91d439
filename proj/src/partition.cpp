#include "gapchain/partition.hpp"

#include <algorithm>
#include <cmath>

#include "gapchain/core_math.hpp"
#include "gapchain/error.hpp"
#include "gapchain/primality.hpp"

namespace gapchain {

namespace {

// Sigma is enumerated exactly; beyond this window size it is not attempted.
constexpr double kSigmaEnumerationCap = 1e9;

std::uint64_t floor_u64(double v) { return v <= 0 ? 0 : static_cast<std::uint64_t>(std::floor(v)); }

double window_sigma(double lo, double hi, std::uint64_t B0) {
  if (!(hi > lo) || hi < 2) return 1.0;
  if (hi > kSigmaEnumerationCap) {
    throw InvalidInput("small-prime window upper end " + std::to_string(hi) + " too large to enumerate");
  }
  double sigma = 1.0;
  for_each_prime(floor_u64(lo), floor_u64(hi), [&](std::uint64_t s) {
    if (s != B0) sigma *= 1.0 - 1.0 / static_cast<double>(s);
  });
  return sigma;
}

}  // namespace

const char* to_string(Provenance p) { return p == Provenance::formula ? "formula" : "override"; }

bool ParamOverrides::any() const {
  return y || z || small_low || small_high || r || epsilon || C_target;
}

bool Params::toy() const {
  return std::any_of(provenance.begin(), provenance.end(),
                     [](const auto& kv) { return kv.second == Provenance::override_value; });
}

Params derive_parameters(double x, double c, double A, const ParamOverrides& overrides,
                         const DeriveOptions& options) {
  if (!(c > 0 && c < 0.5)) throw InvalidInput("derive_parameters: c must lie in (0, 1/2)");
  if (!(A >= 1)) throw InvalidInput("derive_parameters: A must be >= 1");
  const bool toy = overrides.any();
  if (toy) {
    // x >= 16 keeps log_3 x positive for any formula a toy run still uses.
    if (!(x >= 16)) throw InvalidInput("derive_parameters: toy mode requires x >= 16");
  } else {
    // Formula mode needs every iterate through log_4 positive, i.e. x > e^(e^e).
    log_iterates(x, 4);
  }

  Params p;
  p.x = x;
  p.c = c;
  p.A = A;
  p.c0 = options.c0;
  p.r0 = options.r0;
  auto set = [&](const char* name, std::optional<double> ov, auto formula) {
    if (ov) {
      p.provenance[name] = Provenance::override_value;
      return *ov;
    }
    p.provenance[name] = Provenance::formula;
    return formula();
  };
  auto iter3 = [&] { return log_iterates(x, 3); };

  p.epsilon = set("epsilon", overrides.epsilon, [&] { return std::min(0.5, 1.0 / (4.0 * A * A)); });
  if (!(p.epsilon > 0 && p.epsilon <= 0.5)) throw InvalidInput("derive_parameters: epsilon must lie in (0, 1/2]");
  p.y = set("y", overrides.y, [&] {
    auto L = iter3();
    return c * x * L.at(1) * L.at(3) / L.at(2);
  });
  if (!(p.y > x)) throw InvalidInput("derive_parameters: y must exceed x");
  p.z = set("z", overrides.z, [&] {
    auto L = iter3();
    return std::pow(x, L.at(3) / (4.0 * L.at(2)));
  });
  if (!(p.z > 1)) throw InvalidInput("derive_parameters: z must exceed 1");
  p.u = std::log(p.y) / std::log(p.z);
  p.provenance["u"] = p.provenance["y"] == Provenance::formula && p.provenance["z"] == Provenance::formula
                          ? Provenance::formula
                          : Provenance::override_value;
  if (overrides.r) {
    p.r = *overrides.r;
    p.provenance["r"] = Provenance::override_value;
  } else {
    p.r = std::max<std::uint64_t>(options.r0, floor_u64(std::pow(std::log(x), options.c0)));
    p.provenance["r"] = Provenance::formula;
  }
  if (p.r < 1) throw InvalidInput("derive_parameters: r must be >= 1");
  p.small_low = set("small_low", overrides.small_low, [&] { return std::pow(std::log(x), 20.0); });
  p.small_high = set("small_high", overrides.small_high, [&] { return p.z; });
  p.sigma = window_sigma(p.small_low, p.small_high, 1);
  p.provenance["sigma"] = p.provenance["small_low"] == Provenance::formula &&
                                  p.provenance["small_high"] == Provenance::formula
                              ? Provenance::formula
                              : Provenance::override_value;
  // The constant C in the covering step is of exact order 1/c.
  p.C_target = set("C_target", overrides.C_target, [&] { return 1.0 / c; });
  return p;
}

std::uint64_t PrimePartition::z_floor() const { return std::max<std::uint64_t>(1, floor_u64(params.z)); }

bool PrimePartition::in_S(std::uint64_t p) const { return std::binary_search(S.begin(), S.end(), p); }
bool PrimePartition::in_P(std::uint64_t p) const { return std::binary_search(P.begin(), P.end(), p); }
bool PrimePartition::in_Q(std::uint64_t q) const { return std::binary_search(Q.begin(), Q.end(), q); }

PrimePartition build_partition(const Params& params, std::uint64_t B0) {
  if (B0 == 0 || (B0 != 1 && !is_prime_u64(B0))) {
    throw InvalidInput("build_partition: B0 must be 1 or a prime, got " + std::to_string(B0));
  }
  if (params.small_high > params.x / 2) {
    throw InvalidInput("build_partition: small window must end at or below x/2");
  }
  PrimePartition out;
  out.params = params;
  out.x = floor_u64(params.x);
  out.y = floor_u64(params.y);
  out.B0 = B0;
  auto without_b0 = [B0](std::vector<std::uint64_t> v) {
    std::erase(v, B0);
    return v;
  };
  if (params.small_low < params.small_high) {
    out.S = without_b0(primes_in_range(floor_u64(params.small_low), floor_u64(params.small_high)));
  }
  out.P = without_b0(primes_in_range(out.x / 2, out.x));
  out.Q = without_b0(primes_in_range(out.x, out.y));
  if (out.Q.empty()) throw InvalidInput("build_partition: Q is empty, nothing to sieve toward");
  if (out.S.empty()) {
    out.warnings.push_back("S is empty: small-prime window (" + std::to_string(params.small_low) + ", " +
                           std::to_string(params.small_high) + "] contains no primes");
  }
  out.sigma = mertens_density(out.S).value;
  check_partition(out);
  return out;
}

void check_partition(const PrimePartition& pt) {
  const auto& prm = pt.params;
  for (auto s : pt.S) {
    if (!(static_cast<double>(s) > prm.small_low && static_cast<double>(s) <= prm.small_high) || s == pt.B0) {
      throw Error("partition: S member " + std::to_string(s) + " out of range");
    }
  }
  for (auto p : pt.P) {
    if (!(2 * p > pt.x && p <= pt.x) || p == pt.B0) throw Error("partition: P member " + std::to_string(p) + " out of range");
  }
  for (auto q : pt.Q) {
    if (!(q > pt.x && q <= pt.y) || q == pt.B0) throw Error("partition: Q member " + std::to_string(q) + " out of range");
  }
  if (!pt.S.empty() && !pt.P.empty() && pt.S.back() >= pt.P.front()) throw Error("partition: S and P overlap");
  if (!pt.P.empty() && !pt.Q.empty() && pt.P.back() >= pt.Q.front()) throw Error("partition: P and Q overlap");
  if (!pt.S.empty() && !pt.Q.empty() && pt.S.back() >= pt.Q.front()) throw Error("partition: S and Q overlap");
}

}  // namespace gapchain
