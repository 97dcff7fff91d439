#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "gapchain/covering.hpp"
#include "gapchain/error.hpp"

using namespace gapchain;

namespace {

double leftover_fraction(std::uint32_t N, std::uint32_t P, std::uint32_t m, std::uint64_t seed,
                         CoverProfile profile = CoverProfile::poisson) {
  SynthOptions so;
  so.profile = profile;
  const auto inst = synth_instance(N, P, m, so);
  Engine rng = make_engine(seed, "cover-test");
  const auto res = nibble_cover(inst, m, rng);
  return static_cast<double>(res.leftover.size()) / N;
}

}  // namespace

TEST_CASE("synth_instance coverage and edge size") {
  const auto inst = synth_instance(20'000, 2'000, 1);
  CHECK(inst.C == doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(inst.inclusion_probability() == doctest::Approx(std::log(5.0) / 2000));
  CHECK(inst.expected_edge_size() == doctest::Approx(10 * std::log(5.0)));
  CHECK(inst.r_cap >= 16);
  CHECK(synth_instance(20'000, 2'000, 3).C == doctest::Approx(3 * std::log(5.0)));

  Engine rng = make_engine(1, "edges");
  double total = 0;
  const int draws = 4000;
  for (int i = 0; i < draws; ++i) {
    const auto e = draw_edge(inst, rng);
    REQUIRE(std::is_sorted(e.begin(), e.end()));
    REQUIRE(std::adjacent_find(e.begin(), e.end()) == e.end());
    REQUIRE((e.empty() || e.back() < inst.N));
    total += static_cast<double>(e.size());
  }
  // Binomial(N, C/P) edge size: variance about the mean.
  const double mean = total / draws;
  CHECK(std::abs(mean - inst.expected_edge_size()) <= 4 * std::sqrt(inst.expected_edge_size() / draws));
}

TEST_CASE("fixed-size edges have the rounded expected size") {
  SynthOptions so;
  so.profile = CoverProfile::fixed_size;
  const auto inst = synth_instance(10'000, 1'000, 2, so);
  Engine rng = make_engine(2, "fixed");
  const auto want = static_cast<std::size_t>(std::llround(inst.expected_edge_size()));
  for (int i = 0; i < 50; ++i) CHECK(draw_edge(inst, rng).size() == want);
}

TEST_CASE("truncation clamps to r_cap") {
  SynthOptions so;
  so.r_cap = 5;
  const auto inst = synth_instance(10'000, 100, 1, so);
  Engine rng = make_engine(3, "trunc");
  bool truncated = false;
  const auto e = draw_edge(inst, rng, &truncated);
  CHECK(truncated);
  CHECK(e.size() == 5);
}

TEST_CASE("estimated coverage of a point is the total coverage") {
  for (auto profile : {CoverProfile::poisson, CoverProfile::fixed_size}) {
    SynthOptions so;
    so.profile = profile;
    const auto inst = synth_instance(2'000, 200, 1, so);
    const auto est = estimate_coverage(inst, 17, 4000, 9);
    CHECK(est.draws == 4000);
    CHECK(std::abs(est.mean - inst.C) <= 3 * est.standard_error + 1e-3 * inst.C);
  }
}

TEST_CASE("nibble: set algebra, blocks and survivors") {
  const auto inst = synth_instance(20'000, 2'000, 2);
  Engine rng = make_engine(4, "algebra");
  const auto res = nibble_cover(inst, 2, rng);
  CHECK(check_cover(inst, res).empty());
  CHECK(res.rounds == 2);
  REQUIRE(res.blocks.size() == 2);
  CHECK(res.blocks[0].size() == 1000);
  CHECK(res.blocks[1].size() == 1000);
  std::vector<std::uint32_t> all = res.blocks[0];
  all.insert(all.end(), res.blocks[1].begin(), res.blocks[1].end());
  std::sort(all.begin(), all.end());
  for (std::uint32_t i = 0; i < 2000; ++i) REQUIRE(all[i] == i);
  REQUIRE(res.survivors_after_round.size() == 2);
  CHECK(res.survivors_after_round[0] >= res.survivors_after_round[1]);
  CHECK(res.survivors_after_round.back() == res.leftover.size());

  // A corrupted result is caught.
  auto bad = res;
  if (!bad.leftover.empty()) {
    bad.leftover.pop_back();
    CHECK_FALSE(check_cover(inst, bad).empty());
  }
}

TEST_CASE("heavy coverage leaves nothing") {
  SynthOptions so;
  so.coverage_per_round = 20;
  const auto inst = synth_instance(1'000, 100, 1, so);
  Engine rng = make_engine(5, "full");
  const auto res = nibble_cover(inst, 1, rng);
  CHECK(res.leftover.empty());
  CHECK(check_cover(inst, res).empty());
}

TEST_CASE("leftover shrinks by about 5 per round") {
  for (std::uint32_t m = 1; m <= 3; ++m) {
    std::vector<double> f;
    for (std::uint64_t s = 1; s <= 5; ++s) f.push_back(leftover_fraction(20'000, 2'000, m, s));
    std::nth_element(f.begin(), f.begin() + 2, f.end());
    const double target = std::pow(5.0, -static_cast<double>(m));
    CHECK(f[2] == doctest::Approx(target).epsilon(0.25));
  }
  CHECK(leftover_fraction(20'000, 2'000, 1, 8) > leftover_fraction(20'000, 2'000, 2, 8));
  CHECK(leftover_fraction(20'000, 2'000, 2, 8) > leftover_fraction(20'000, 2'000, 3, 8));
}

TEST_CASE("determinism and thread invariance") {
  const auto inst = synth_instance(20'000, 2'000, 2);
  Engine a = make_engine(6, "det");
  Engine b = make_engine(6, "det");
  NibbleOptions four;
  four.threads = 4;
  const auto ra = nibble_cover(inst, 2, a);
  const auto rb = nibble_cover(inst, 2, b, four);
  CHECK(ra.leftover == rb.leftover);
  CHECK(ra.eprime == rb.eprime);
  CHECK(ra.blocks == rb.blocks);
}

TEST_CASE("subset leftover") {
  const auto inst = synth_instance(20'000, 2'000, 1);
  Engine rng = make_engine(7, "subset");
  const auto res = nibble_cover(inst, 1, rng);
  CHECK(subset_leftover(res, res.leftover, inst.N) == res.leftover.size());
  CHECK(subset_leftover(res, std::vector<std::uint32_t>{}, inst.N) == 0);
  const auto sub = random_subset(inst.N, 2'000, rng);
  CHECK(sub.size() == 2'000);
  CHECK(std::is_sorted(sub.begin(), sub.end()));
  std::size_t want = 0;
  for (auto q : sub) want += std::binary_search(res.leftover.begin(), res.leftover.end(), q);
  CHECK(subset_leftover(res, sub, inst.N) == want);
  CHECK_THROWS_AS(subset_leftover(res, std::vector<std::uint32_t>{inst.N}, inst.N), InvalidInput);
}

TEST_CASE("profile names") {
  CHECK(cover_profile_from_string(to_string(CoverProfile::poisson)) == CoverProfile::poisson);
  CHECK(cover_profile_from_string(to_string(CoverProfile::fixed_size)) == CoverProfile::fixed_size);
  CHECK_THROWS_AS(cover_profile_from_string("uniform"), InvalidInput);
}

TEST_CASE("synth_instance preconditions") {
  CHECK_THROWS_AS(synth_instance(5, 2, 1), InvalidInput);
  CHECK_THROWS_AS(synth_instance(100, 2, 3), InvalidInput);
  SynthOptions so;
  so.delta_max = 0.01;
  CHECK_THROWS_AS(synth_instance(100, 10, 1, so), InvalidInput);
  CHECK_THROWS_AS(random_subset(10, 11, *std::make_unique<Engine>(1)), InvalidInput);
}
