#pragma once

// Brute-force references. Nothing here calls into the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Plain Eratosthenes over [0, n].
inline std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
  std::vector<char> comp(n + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

// Largest k-gap minimum, scanning consecutive prime windows directly.
inline std::uint64_t gk(const std::vector<std::uint64_t>& primes, unsigned k) {
  std::uint64_t best = 0;
  for (std::size_t n = 0; n + k < primes.size(); ++n) {
    std::uint64_t mn = primes[n + 1] - primes[n];
    for (unsigned j = 1; j < k; ++j) mn = std::min(mn, primes[n + j + 1] - primes[n + j]);
    best = std::max(best, mn);
  }
  return best;
}

inline std::uint64_t largest_prime_factor(std::uint64_t n) {
  std::uint64_t best = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      best = d;
      n /= d;
    }
  }
  return n > 1 ? std::max(best, n) : best;
}

// #{1 <= n <= y : every prime factor of n is <= z}.
inline std::uint64_t psi(std::uint64_t y, std::uint64_t z) {
  std::uint64_t c = 0;
  for (std::uint64_t n = 1; n <= y; ++n) c += largest_prime_factor(n) <= z;
  return c;
}

// Smallest t >= 0 with t = r_i (mod m_i) for all i, by exhaustive search.
inline std::pair<std::uint64_t, std::uint64_t> crt(const std::vector<std::uint64_t>& r,
                                                   const std::vector<std::uint64_t>& m) {
  std::uint64_t M = 1;
  for (auto v : m) M *= v;
  for (std::uint64_t t = 0; t < M; ++t) {
    bool ok = true;
    for (std::size_t i = 0; i < m.size() && ok; ++i) ok = t % m[i] == r[i] % m[i];
    if (ok) return {t, M};
  }
  return {M, M};
}

// {n in (lo, hi] : n mod p != a_p for every (p, a_p)}.
inline std::vector<std::uint64_t> sift(std::uint64_t lo, std::uint64_t hi,
                                       const std::map<std::uint64_t, std::uint64_t>& classes) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo + 1; n <= hi; ++n) {
    bool keep = true;
    for (const auto& [p, a] : classes) {
      if (n % p == a % p) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(n);
  }
  return out;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Survival probability of all points under a uniform class per s, by
// enumerating every class vector. Returned as (survivors, total).
inline std::pair<std::uint64_t, std::uint64_t> survival_by_enumeration(const std::vector<std::int64_t>& points,
                                                                       const std::vector<std::uint64_t>& S) {
  std::uint64_t total = 1;
  for (auto s : S) total *= s;
  std::uint64_t good = 0;
  std::vector<std::uint64_t> a(S.size(), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < S.size(); ++i) {
      a[i] = rest % S[i];
      rest /= S[i];
    }
    bool ok = true;
    for (auto n : points) {
      for (std::size_t i = 0; i < S.size() && ok; ++i) ok = static_cast<std::uint64_t>(mod(n, S[i])) != a[i];
    }
    good += ok;
  }
  return {good, total};
}

// Survival probability as a double, one prime at a time.
inline double survival_product(const std::vector<std::int64_t>& points, const std::vector<std::uint64_t>& S) {
  double p = 1;
  for (auto s : S) {
    std::set<std::int64_t> cls;
    for (auto n : points) cls.insert(mod(n, static_cast<std::int64_t>(s)));
    p *= 1.0 - static_cast<double>(cls.size()) / static_cast<double>(s);
  }
  return p;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

}  // namespace oracle
