#include "gapchain/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gapchain/primality.hpp"

namespace gapchain {

namespace {

constexpr std::uint64_t kSegmentOdds = 1u << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Plain sieve of the odd primes up to limit; used for base primes.
std::vector<std::uint64_t> small_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  std::vector<char> composite(limit / 2 + 1, 0);
  for (std::uint64_t i = 3; i <= limit; i += 2) {
    if (composite[i / 2]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j / 2] = 1;
  }
  return out;
}

}  // namespace

bool PrimeList::contains(std::uint64_t n) const { return std::binary_search(primes.begin(), primes.end(), n); }

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& visit) {
  if (hi <= lo || hi < 2) return;
  if (lo < 2) visit(2);
  const auto base = small_sieve(isqrt(hi));
  // Segment over odd numbers n = 2k+1 with k in [k_begin, k_end).
  std::uint64_t first = std::max<std::uint64_t>(lo + 1, 3);
  if (first % 2 == 0) ++first;
  std::uint64_t k_begin = first / 2;
  const std::uint64_t k_stop = (hi - 1) / 2 + 1;  // one past largest odd <= hi
  std::vector<char> composite;
  while (k_begin < k_stop) {
    const std::uint64_t k_end = std::min(k_begin + kSegmentOdds, k_stop);
    composite.assign(k_end - k_begin, 0);
    const std::uint64_t seg_lo = 2 * k_begin + 1;
    const std::uint64_t seg_hi = 2 * (k_end - 1) + 1;
    for (std::size_t bi = 1; bi < base.size(); ++bi) {
      const std::uint64_t p = base[bi];
      if (p * p > seg_hi) break;
      std::uint64_t start = std::max(p * p, ((seg_lo + p - 1) / p) * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; m <= seg_hi; m += 2 * p) composite[m / 2 - k_begin] = 1;
    }
    for (std::uint64_t k = k_begin; k < k_end; ++k) {
      if (!composite[k - k_begin] && k > 0) visit(2 * k + 1);
    }
    k_begin = k_end;
  }
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

PrimeList sieve_primes(std::uint64_t limit) { return PrimeList{limit, primes_in_range(0, limit)}; }

CrtSolution crt_combine(std::span<const Congruence> congruences) {
  mpz_class offset = 0;
  mpz_class modulus = 1;
  for (std::size_t j = 0; j < congruences.size(); ++j) {
    const mpz_class& m = congruences[j].modulus.mpz();
    if (m < 1) throw InvalidInput("crt_combine: modulus must be >= 1 at index " + std::to_string(j));
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), m.get_mpz_t());
    if (g != 1) {
      for (std::size_t i = 0; i < j; ++i) {
        mpz_class gi;
        mpz_gcd(gi.get_mpz_t(), congruences[i].modulus.mpz().get_mpz_t(), m.get_mpz_t());
        if (gi != 1) {
          throw CrtError(i, j,
                         "crt_combine: moduli " + congruences[i].modulus.to_decimal() + " (index " +
                             std::to_string(i) + ") and " + congruences[j].modulus.to_decimal() + " (index " +
                             std::to_string(j) + ") are not coprime");
        }
      }
    }
    mpz_class r;
    mpz_mod(r.get_mpz_t(), congruences[j].residue.mpz().get_mpz_t(), m.get_mpz_t());
    // offset + modulus * t == r (mod m)
    mpz_class inv;
    mpz_class mod_m;
    mpz_mod(mod_m.get_mpz_t(), modulus.get_mpz_t(), m.get_mpz_t());
    if (m == 1) continue;
    mpz_invert(inv.get_mpz_t(), mod_m.get_mpz_t(), m.get_mpz_t());
    mpz_class t = (r - offset) * inv;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
    offset += modulus * t;
    modulus *= m;
  }
  return CrtSolution{BigNat(offset), BigNat(modulus)};
}

MertensDensity mertens_density(std::span<const std::uint64_t> primes) {
  std::set<std::uint64_t> seen;
  mpz_class num = 1;
  mpz_class den = 1;
  for (auto s : primes) {
    if (!is_prime_u64(s)) throw InvalidInput("mertens_density: " + std::to_string(s) + " is not prime");
    if (!seen.insert(s).second) throw InvalidInput("mertens_density: duplicate prime " + std::to_string(s));
    num *= BigNat(s - 1).mpz();
    den *= BigNat(s).mpz();
  }
  MertensDensity out;
  out.exact = mpq_class(num, den);
  out.exact.canonicalize();
  out.value = out.exact.get_d();
  return out;
}

double LogIterates::at(int k) const {
  if (k < 1 || k > depth) throw InvalidInput("LogIterates: iterate " + std::to_string(k) + " not computed");
  return values[static_cast<std::size_t>(k - 1)];
}

LogIterates log_iterates(double x, int depth) {
  if (depth < 1 || depth > 4) throw InvalidInput("log_iterates: depth must be in [1, 4]");
  LogIterates out;
  out.depth = depth;
  double v = x;
  for (int k = 1; k <= depth; ++k) {
    if (!(v > 0.0)) {
      throw DomainError("log_" + std::to_string(k) + " x is undefined for x = " + std::to_string(x));
    }
    v = std::log(v);
    if (!(v > 0.0)) {
      throw DomainError("log_" + std::to_string(k) + " x is not positive for x = " + std::to_string(x));
    }
    out.values[static_cast<std::size_t>(k - 1)] = v;
  }
  return out;
}

SmoothCount smooth_count(std::uint64_t y, std::uint64_t z) {
  if (y < 1) throw InvalidInput("smooth_count: y must be >= 1");
  if (z < 2) throw InvalidInput("smooth_count: z must be >= 2");
  SmoothCount out;
  out.u = std::log(static_cast<double>(y)) / std::log(static_cast<double>(z));
  out.estimate = out.u > 0.0 ? static_cast<double>(y) * std::exp(-out.u * std::log(out.u)) : static_cast<double>(y);
  if (z >= y) {
    out.exact = y;
    return out;
  }
  // Strike every multiple of a prime in (z, y]; what remains is z-smooth.
  std::vector<char> rough(y + 1, 0);
  for_each_prime(z, y, [&](std::uint64_t p) {
    for (std::uint64_t m = p; m <= y; m += p) rough[m] = 1;
  });
  out.exact = static_cast<std::uint64_t>(std::count(rough.begin() + 1, rough.end(), 0));
  return out;
}

bool is_smooth_times_power(std::uint64_t n, std::uint64_t bound, std::uint64_t extra) {
  if (n == 0) return false;
  if (extra > 1) {
    while (n % extra == 0) n /= extra;
  }
  for (std::uint64_t d = 2; d <= bound && d * d <= n; ++d) {
    while (n % d == 0) n /= d;
  }
  return n <= bound || n == 1;
}

}  // namespace gapchain
