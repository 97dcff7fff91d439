#include "gapchain/primality.hpp"

#include <array>
#include <cmath>

#include "gapchain/rng.hpp"

namespace gapchain {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool sprp_u64(std::uint64_t n, std::uint64_t a) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

constexpr std::array<unsigned, 13> kDeterministicBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

constexpr std::array<unsigned, 168> kTrialPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,  67,  71,  73,
    79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
    191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409, 419, 421, 431, 433,
    439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521, 523, 541, 547, 557, 563, 569, 571,
    577, 587, 593, 599, 601, 607, 613, 617, 619, 631, 641, 643, 647, 653, 659, 661, 673, 677, 683, 691, 701,
    709, 719, 727, 733, 739, 743, 751, 757, 761, 769, 773, 787, 797, 809, 811, 821, 823, 827, 829, 839, 853,
    857, 859, 863, 877, 881, 883, 887, 907, 911, 919, 929, 937, 941, 947, 953, 967, 971, 977, 983, 991, 997};

const mpz_class& deterministic_bound() {
  static const mpz_class bound(kDeterministicBound, 10);
  return bound;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::prime: return "prime";
    case Verdict::composite: return "composite";
    case Verdict::probably_prime: return "probably-prime";
  }
  return "?";
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  if (n < 37 * 37) return true;
  // The first 12 prime bases are exact for all n < 3.18e23 > 2^64.
  for (unsigned a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (!sprp_u64(n, a)) return false;
  }
  return true;
}

bool strong_probable_prime(const mpz_class& n, const mpz_class& a) {
  mpz_class nm1 = n - 1;
  mpz_class d = nm1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  mpz_class x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == nm1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == nm1) return true;
  }
  return false;
}

mpz_class probabilistic_base(const mpz_class& n, unsigned round) {
  // Seed from the low 64 bits and the size of n, so the base sequence is
  // reproducible from n alone.
  std::uint64_t low = 0;
  mpz_class lowz = n & mpz_class("18446744073709551615");
  mpz_export(&low, nullptr, 1, sizeof(low), 0, 0, lowz.get_mpz_t());
  Engine rng(derive_seed(low ^ mpz_sizeinbase(n.get_mpz_t(), 2), "miller-rabin-base", round));
  mpz_class r = 0;
  const std::size_t words = mpz_sizeinbase(n.get_mpz_t(), 2) / 64 + 2;
  for (std::size_t i = 0; i < words; ++i) {
    std::uint64_t w = rng();
    mpz_class wz;
    mpz_import(wz.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    r = (r << 64) + wz;
  }
  mpz_class span = n - 3;  // bases in [2, n-2]
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), span.get_mpz_t());
  return r + 2;
}

PrimalityResult is_prime(const BigNat& n, const PrimalityPolicy& policy) {
  PrimalityResult out;
  const mpz_class& v = n.mpz();
  if (v < 2) {
    out.verdict = Verdict::composite;
    out.reason = CompositeReason::unit;
    return out;
  }
  for (unsigned p : kTrialPrimes) {
    if (v == p) {
      out.verdict = Verdict::prime;
      return out;
    }
    if (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
      out.verdict = Verdict::composite;
      out.reason = CompositeReason::trial_factor;
      out.evidence = BigNat(std::uint64_t{p});
      return out;
    }
  }
  if (v < 997 * 997) {
    out.verdict = Verdict::prime;
    return out;
  }
  if (v < deterministic_bound()) {
    for (unsigned i = 0; i < kDeterministicBases.size(); ++i) {
      mpz_class a = kDeterministicBases[i];
      if (!strong_probable_prime(v, a)) {
        out.verdict = Verdict::composite;
        out.reason = CompositeReason::mr_witness;
        out.evidence = BigNat(a);
        out.failed_round = i;
        return out;
      }
    }
    out.verdict = Verdict::prime;
    return out;
  }
  for (unsigned i = 0; i < policy.rounds; ++i) {
    mpz_class a = probabilistic_base(v, i);
    if (!strong_probable_prime(v, a)) {
      out.verdict = Verdict::composite;
      out.reason = CompositeReason::mr_witness;
      out.evidence = BigNat(a);
      out.failed_round = i;
      out.rounds = i + 1;
      return out;
    }
  }
  out.verdict = Verdict::probably_prime;
  out.rounds = policy.rounds;
  out.error_bound = std::ldexp(1.0, -2 * static_cast<int>(policy.rounds));
  return out;
}

}  // namespace gapchain
