#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gapchain/core_math.hpp"
#include "gapchain/error.hpp"
#include "gapchain/maier.hpp"
#include "support/oracles.hpp"

using namespace gapchain;

namespace {

PrimePartition partition(double x, double y, std::uint64_t B0 = 1) {
  ParamOverrides o;
  o.y = y;
  o.small_low = 3;
  o.small_high = std::min(20.0, x / 2);
  o.r = 2;
  return build_partition(derive_parameters(x, 0.1, 4, o), B0);
}

ResidueSystem zero_system(const PrimePartition& part) {
  ResidueSystem sys(part.B0);
  for (auto p : primes_in_range(0, part.x)) {
    if (p != part.B0) sys.set(p, 0);
  }
  return sys;
}

ResidueSystem random_system(const PrimePartition& part, std::uint64_t seed) {
  ResidueSystem sys(part.B0);
  Engine rng = make_engine(seed, "classes");
  for (auto p : primes_in_range(0, part.x)) {
    if (p != part.B0) sys.set(p, static_cast<std::int64_t>(uniform_below(rng, p)));
  }
  return sys;
}

struct Toy {
  PrimePartition part;
  ResidueSystem sys;
  SievedSet T;
  MaierFrame frame;
};

// x = 40, y = 200 with the greedy system.
const Toy& toy() {
  static const Toy t = [] {
    Toy out{partition(40, 200), {}, {}, {}};
    out.sys = greedy_rankin(out.part, {});
    out.T = sift_interval(out.part.x, out.part.y, out.sys);
    out.frame = assemble_frame(out.sys, out.part);
    return out;
  }();
  return t;
}

}  // namespace

TEST_CASE("primorial") {
  CHECK(primorial_over(16, 1) == BigNat(30030));
  CHECK(primorial_over(16, 7) == BigNat(4290));
  CHECK(primorial_over(1, 1) == BigNat(1));
  CHECK(primorial_over(40, 1) == BigNat(7420738134810ULL));
}

TEST_CASE("all-zero frame has m = 0") {
  const auto part = partition(16, 60);
  const auto frame = assemble_frame(zero_system(part), part);
  CHECK(frame.P == BigNat(30030));
  CHECK(frame.m == BigNat(0));
}

TEST_CASE("m satisfies every congruence and lies below P") {
  const auto part = partition(40, 200);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto sys = random_system(part, seed);
    const auto frame = assemble_frame(sys, part);
    REQUIRE(frame.m < frame.P);
    for (const auto& [p, a] : sys.entries()) REQUIRE((frame.m.mod_u64(p) + a) % p == 0);
  }
}

TEST_CASE("m matches the exhaustive CRT oracle") {
  const auto part = partition(16, 60);
  const auto sys = random_system(part, 157);
  const auto frame = assemble_frame(sys, part);
  std::vector<std::uint64_t> r, mods;
  for (const auto& [p, a] : sys.entries()) {
    mods.push_back(p);
    r.push_back((p - a) % p);
  }
  const auto [want, M] = oracle::crt(r, mods);
  CHECK(M == 30030);
  CHECK(frame.m == BigNat(want));
}

TEST_CASE("assemble_frame rejects incomplete systems") {
  const auto part = partition(40, 200);
  ResidueSystem sys;
  sys.set(2, 0);
  CHECK_THROWS_AS(assemble_frame(sys, part), InvalidInput);
  auto extra = zero_system(part);
  extra.set(41, 0);
  CHECK_THROWS_AS(assemble_frame(extra, part), InvalidInput);
}

TEST_CASE("B0 is left out of the modulus") {
  const auto part = partition(40, 200, 7);
  const auto frame = assemble_frame(zero_system(part), part);
  CHECK(frame.P == primorial_over(40, 7));
  CHECK(frame.P.mod_u64(7) != 0);
}

TEST_CASE("frame soundness: offsets outside T share a factor with P") {
  const auto& t = toy();
  Engine rng = make_engine(1, "sound");
  const auto rep = frame_soundness(t.frame, t.T, 100'000, rng);
  CHECK_FALSE(rep.failure);
  CHECK(rep.checked == (t.part.y - t.part.x) - t.T.size());
  // Every member of T is coprime to P.
  for (auto n : t.T.members()) CHECK(gcd(t.frame.m + BigNat(n), t.frame.P) == BigNat(1));
}

TEST_CASE("row primes only appear at offsets in T") {
  const auto& t = toy();
  Engine rng = make_engine(2, "rows");
  const auto rows = sample_rows(t.frame, t.T, 200, rng);
  CHECK(rows.trials == 200);
  CHECK(rows.mean_N > 0);
  CHECK(rows.mean_N <= static_cast<double>(t.T.size()));
  CHECK(rows.per_a.size() == t.T.size());
  for (const auto& [a, f] : rows.per_a) {
    CHECK(t.T.contains(a));
    CHECK(f >= 0);
    CHECK(f <= 1);
  }
}

TEST_CASE("an empty T gives prime-free rows") {
  // x = 16, y = 20: classes chosen to hit every offset in (16, 20].
  const auto part = partition(16, 20);
  ResidueSystem sys;
  for (auto p : primes_in_range(0, 16)) sys.set(p, 0);
  sys.set(2, 0);   // 18, 20
  sys.set(3, 17 % 3);
  sys.set(5, 19 % 5);
  const auto T = sift_interval(16, 20, sys);
  REQUIRE(T.empty());
  const auto frame = assemble_frame(sys, part);
  Engine rng = make_engine(3, "empty");
  const auto rows = sample_rows(frame, T, 50, rng);
  CHECK(rows.mean_N == 0);
  Engine crng = make_engine(3, "chain");
  const auto search = find_gap_chain(frame, T, 1, 0.01, 20, crng);
  CHECK_FALSE(search.certificate);
}

TEST_CASE("bit budget is enforced") {
  const auto& t = toy();
  MaierOptions mo;
  mo.max_bits = 10;
  Engine rng = make_engine(4, "bits");
  CHECK_THROWS_AS(sample_rows(t.frame, t.T, 5, rng, mo), InvalidInput);
}

TEST_CASE("chain search yields certificates that verify and resist tampering") {
  const auto& t = toy();
  std::size_t found = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Engine rng = make_engine(seed, "chain");
    const auto search = find_gap_chain(t.frame, t.T, 2, 0.05, 500, rng);
    if (!search.certificate) continue;
    ++found;
    const auto& cert = *search.certificate;
    REQUIRE(cert.prime_offsets.size() == 3);
    REQUIRE(cert.min_gap >= static_cast<std::uint64_t>(std::ceil(0.05 * 200)));
    const auto text = certificate_to_json(cert);
    const auto back = certificate_from_json(text);
    REQUIRE(certificate_to_json(back) == text);
    const auto v = verify_certificate(back);
    REQUIRE_MESSAGE(v.accepted, v.reason);
    CHECK_FALSE(verify_certificate(tamper_shift_prime(back, 1)).accepted);
    CHECK_FALSE(verify_certificate(tamper_drop_evidence(back, 0)).accepted);
    CHECK_FALSE(verify_certificate(tamper_inflate_gap(back)).accepted);
  }
  CHECK(found >= 25);
}

TEST_CASE("k = 1 chains") {
  const auto& t = toy();
  Engine rng = make_engine(5, "k1");
  const auto search = find_gap_chain(t.frame, t.T, 1, 0.1, 500, rng);
  REQUIRE(search.certificate);
  CHECK(search.certificate->prime_offsets.size() == 2);
  CHECK(verify_certificate(*search.certificate).accepted);
}

TEST_CASE("an impossible gap demand reports a miss") {
  const auto& t = toy();
  Engine rng = make_engine(6, "miss");
  const auto search = find_gap_chain(t.frame, t.T, 2, 0.99, 40, rng);
  CHECK_FALSE(search.certificate);
  CHECK(search.trials_used == 40);
  CHECK(search.miss.trials == 40);
  CHECK(search.miss.required_gap == 198);
  CHECK(search.miss.best_min_gap < 198);
}

TEST_CASE("verifier rejects malformed documents and bad fields") {
  CHECK_THROWS_AS(certificate_from_json("{}"), InvalidInput);
  CHECK_THROWS_AS(certificate_from_json("not json"), InvalidInput);
  const auto& t = toy();
  Engine rng = make_engine(7, "chain");
  const auto search = find_gap_chain(t.frame, t.T, 2, 0.05, 500, rng);
  REQUIRE(search.certificate);
  auto c = *search.certificate;
  c.m = c.m + BigNat(1);
  CHECK_FALSE(verify_certificate(c).accepted);
  c = *search.certificate;
  c.classes.pop_back();
  CHECK_FALSE(verify_certificate(c).accepted);
  c = *search.certificate;
  c.epsilon = 0.5;
  CHECK_FALSE(verify_certificate(c).accepted);
}

TEST_CASE("gk_direct") {
  CHECK(gk_direct(100, 1) == 8);
  CHECK(gk_direct(100, 2) == 6);
  CHECK(gk_direct(1'000'000, 1) == 114);
  const auto primes = oracle::primes_upto(20'000);
  for (std::uint64_t X : {10ULL, 30ULL, 100ULL, 1000ULL, 5000ULL, 20000ULL}) {
    std::vector<std::uint64_t> upto;
    for (auto p : primes) {
      if (p <= X) upto.push_back(p);
    }
    std::uint64_t prev = ~0ULL;
    for (unsigned k = 1; k <= 3; ++k) {
      const auto g = gk_direct(X, k);
      CHECK(g == oracle::gk(upto, k));
      CHECK(g <= prev);
      prev = g;
    }
  }
  CHECK(gk_direct(1000, 1) <= gk_direct(10'000, 1));
  CHECK_THROWS_AS(gk_direct(2, 1), DomainError);
  CHECK_THROWS_AS(gk_direct(200'000'000, 1), DomainError);
}
