#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>

#include "gapchain/construction.hpp"
#include "gapchain/error.hpp"
#include "support/oracles.hpp"

using namespace gapchain;

namespace {

std::shared_ptr<const PrimePartition> partition(double x, double y, double lo, double hi, std::uint64_t r) {
  ParamOverrides o;
  o.y = y;
  o.small_low = lo;
  o.small_high = hi;
  o.r = r;
  return std::make_shared<const PrimePartition>(build_partition(derive_parameters(x, 0.1, 4, o)));
}

std::shared_ptr<const WeightTable> weights(const PrimePartition& part, WeightKind kind) {
  WeightOptions wo;
  wo.kind = kind;
  return std::make_shared<const WeightTable>(build_weights(part, first_primes_tuple(part.params.r), wo));
}

// Upper critical values of chi-square at p = 1e-4.
double chi2_crit(int df) {
  static const std::map<int, double> table{{2, 18.42}, {4, 23.51}, {6, 27.86}, {14, 42.58}, {34, 69.10}};
  return table.at(df);
}

}  // namespace

TEST_CASE("correlation probability, closed forms") {
  const std::vector<std::uint64_t> S{3, 5, 7, 11};
  const std::vector<std::int64_t> one{17};
  mpq_class want(2 * 4 * 6 * 10, 3 * 5 * 7 * 11);
  want.canonicalize();
  CHECK(correlation_probability(one, S).exact == want);

  const std::vector<std::uint64_t> S2{3, 5};
  const std::vector<std::int64_t> pair{0, 1};
  CHECK(correlation_probability(pair, S2).value == doctest::Approx(0.2).epsilon(1e-15));

  const std::vector<std::int64_t> dup{4, 4};
  CHECK_THROWS_AS(correlation_probability(dup, S2), InvalidInput);
  CHECK_THROWS_AS(correlation_probability(std::vector<std::int64_t>{}, S2), InvalidInput);
  // Empty S: every point survives.
  CHECK(correlation_probability(pair, std::vector<std::uint64_t>{}).value == 1.0);
}

TEST_CASE("correlation probability matches enumeration") {
  Engine rng = make_engine(7, "corr");
  const std::vector<std::uint64_t> S{3, 5, 7, 11, 13};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t t = 1 + uniform_below(rng, 5);
    std::set<std::int64_t> pts;
    while (pts.size() < t) pts.insert(static_cast<std::int64_t>(uniform_below(rng, 400)) - 200);
    const std::vector<std::int64_t> v(pts.begin(), pts.end());
    const auto [num, den] = oracle::survival_by_enumeration(v, S);
    const auto got = correlation_probability(v, S);
    mpq_class want(mpz_class(static_cast<unsigned long>(num)), mpz_class(static_cast<unsigned long>(den)));
    want.canonicalize();
    REQUIRE(got.exact == want);
    REQUIRE(got.value == doctest::Approx(oracle::survival_product(v, S)).epsilon(1e-14));
  }
}

TEST_CASE("small classes: per-prime uniformity and pair independence") {
  const std::vector<std::uint64_t> S{3, 5, 7};
  const int N = 30'000;
  Engine rng = make_engine(3, "classes");
  std::vector<std::vector<int>> marg(3);
  for (std::size_t i = 0; i < 3; ++i) marg[i].assign(S[i], 0);
  std::vector<int> joint(15, 0);
  for (int k = 0; k < N; ++k) {
    const auto a = sample_small_classes(S, rng);
    REQUIRE(a.primes == S);
    for (std::size_t i = 0; i < 3; ++i) {
      REQUIRE(a.residues[i] < S[i]);
      ++marg[i][a.residues[i]];
    }
    ++joint[a.residues[0] * 5 + a.residues[1]];
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const double e = static_cast<double>(N) / static_cast<double>(S[i]);
    double chi = 0;
    for (int c : marg[i]) chi += (c - e) * (c - e) / e;
    CHECK(chi < chi2_crit(static_cast<int>(S[i]) - 1));
  }
  double chi = 0;
  const double e = N / 15.0;
  for (int c : joint) chi += (c - e) * (c - e) / e;
  CHECK(chi < chi2_crit(14));
}

TEST_CASE("X_p: empty S gives 1 and the good set is all of P") {
  const auto part = partition(100, 1000, 1, 1.5, 1);
  REQUIRE(part->S.empty());
  CHECK_FALSE(part->warnings.empty());
  const auto w = weights(*part, WeightKind::uniform);
  ConstructionOptions co;
  co.eta = 0;
  const auto run = run_construction(part, w, co);
  for (double v : run.Xp) CHECK(v == 1.0);
  CHECK(run.good_count() == part->P.size());
  CHECK(select_good_P(run) == part->P);
}

TEST_CASE("infinite eta selects all of P") {
  const auto part = partition(2000, 22000, 50, 200, 4);
  const auto w = weights(*part, WeightKind::maynard);
  ConstructionOptions co;
  co.eta = std::numeric_limits<double>::infinity();
  co.seed = 5;
  const auto run = run_construction(part, w, co);
  CHECK(select_good_P(run) == part->P);
}

TEST_CASE("goodness: closed form with empty S, uniform weights, r = 1") {
  const auto part = partition(100, 1000, 1, 1.5, 1);
  const auto w = weights(*part, WeightKind::uniform);
  const auto run = run_construction(part, w, {});
  const auto rep = goodness_report(run, 1.0, {1000});
  const double L = static_cast<double>(w->window_length());
  REQUIRE(L == 900);
  CHECK(rep.q_population == part->Q.size());
  CHECK(rep.q_sampled == part->Q.size());
  for (double m : rep.main) CHECK(m == doctest::Approx(static_cast<double>(part->P.size()) / L).epsilon(1e-12));
  CHECK(rep.good_complement_fraction == 0.0);
}

TEST_CASE("normalization and n_p support on the toy run") {
  const auto part = partition(2000, 22000, 50, 200, 4);
  const auto w = weights(*part, WeightKind::maynard);
  ConstructionOptions co;
  co.seed = 11;
  const auto run = run_construction(part, w, co);
  const auto norm = check_normalization(run);
  CHECK(norm.rows_checked == part->P.size());
  CHECK(norm.max_relative_error <= 1e-12);

  Engine rng = make_engine(11, "np-test");
  for (std::size_t k = 0; k < part->P.size(); ++k) {
    const auto p = part->P[k];
    const auto drawn = sample_np(run, p, rng);
    if (!run.good[k]) {
      CHECK(drawn == 0);
      continue;
    }
    CHECK(z_mass(run.abar, *w, p, drawn) > 0);
    CHECK(run.npbar.at(p) != 0);
    CHECK(z_mass(run.abar, *w, p, run.npbar.at(p)) > 0);
  }
  // The running masses of the conditional law add up to X_p.
  const auto p0 = part->P.front();
  const auto law = conditional_law(run, p0);
  CHECK(law.cumulative.back() / w->row(p0).sum == doctest::Approx(run.X(p0)).epsilon(1e-12));
}

TEST_CASE("E over a of X_p equals the weighted correlation sum") {
  const auto part = partition(2000, 22000, 50, 200, 4);
  const auto w = weights(*part, WeightKind::maynard);
  const auto p = part->P[part->P.size() / 2];
  const auto& row = w->row(p);
  const auto& h = w->tuple().h;
  double exact = 0;
  for (std::size_t j = 0; j < row.n.size(); ++j) {
    std::vector<std::int64_t> pts;
    for (auto hi : h) pts.push_back(row.n[j] + hi * static_cast<std::int64_t>(p));
    exact += row.w[j] / row.sum * correlation_probability(pts, part->S).value;
  }
  const int draws = 300;
  Engine rng = make_engine(21, "avg");
  double s = 0, ss = 0;
  for (int i = 0; i < draws; ++i) {
    const double v = compute_Xp(sample_small_classes(part->S, rng), *w, p);
    s += v;
    ss += v * v;
  }
  const double mean = s / draws;
  const double se = std::sqrt((ss / draws - mean * mean) / draws);
  CHECK(std::abs(mean - exact) <= 4 * se);
  // The tuple points are on average about sigma^r likely to survive.
  const double sr = std::pow(part->sigma, 4.0);
  CHECK(exact / sr == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("small S toy: the good set is most of P") {
  const auto part = partition(1000, 11000, 4, 8, 2);
  REQUIRE(part->S == std::vector<std::uint64_t>{5, 7});
  const auto w = weights(*part, WeightKind::maynard);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ConstructionOptions co;
    co.seed = seed;
    const auto run = run_construction(part, w, co);
    const double complement = 1.0 - static_cast<double>(run.good_count()) / static_cast<double>(part->P.size());
    CHECK(complement < 0.2);
  }
}

TEST_CASE("construction is determined by the seed") {
  const auto part = partition(2000, 22000, 50, 200, 4);
  const auto w = weights(*part, WeightKind::maynard);
  ConstructionOptions co;
  co.seed = 99;
  const auto a = run_construction(part, w, co);
  const auto b = run_construction(part, w, co);
  CHECK(a.abar.residues == b.abar.residues);
  CHECK(a.Xp == b.Xp);
  CHECK(a.npbar == b.npbar);
  co.seed = 100;
  const auto c = run_construction(part, w, co);
  CHECK(a.abar.residues != c.abar.residues);
}

TEST_CASE("X_p and z_mass reject unknown p") {
  const auto part = partition(2000, 22000, 50, 200, 4);
  const auto w = weights(*part, WeightKind::maynard);
  Engine rng = make_engine(1, "x");
  const auto abar = sample_small_classes(part->S, rng);
  CHECK_THROWS_AS(compute_Xp(abar, *w, 2003), InvalidInput);
}
