// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every tolerance and time limit is pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <set>
#include <string>

#include "gapchain/concentration.hpp"
#include "gapchain/config.hpp"
#include "gapchain/construction.hpp"
#include "gapchain/core_math.hpp"
#include "gapchain/covering.hpp"
#include "gapchain/harness.hpp"
#include "gapchain/maier.hpp"
#include "gapchain/report.hpp"
#include "support/oracles.hpp"

using namespace gapchain;

namespace {

constexpr double kSieveSeconds = 10;
constexpr double kCorrelationSE = 4;
constexpr double kSigmaRelTol = 1e-12;
constexpr double kCorrelationSeconds = 60;
constexpr double kNormalizationRelTol = 1e-12;
constexpr double kLeftoverRelTol = 0.15;
constexpr double kSubsetRelTol = 0.20;
constexpr double kCoverSeconds = 120;
constexpr double kRowSumRatio = 1.1;
constexpr double kOffTupleRatio = 0.1;
constexpr double kPointMass = 1e-2;
constexpr double kMaierSeconds = 300;
constexpr double kChebyshevSlack = 3;

struct Outcome {
  bool passed = false;
  std::string detail;
};

class Stopclock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::shared_ptr<const PrimePartition> toy_partition() {
  ParamOverrides o;
  o.y = 22000;
  o.small_low = 50;
  o.small_high = 200;
  o.r = 4;
  return std::make_shared<const PrimePartition>(build_partition(derive_parameters(2000, 0.1, 4, o)));
}

Outcome sieve_equivalence() {
  Stopclock clock;
  Engine rng = make_engine(2024, "acceptance-sieve");
  const auto small = oracle::primes_upto(200);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t lo = uniform_below(rng, 100'000);
    const std::uint64_t hi = lo + 1 + uniform_below(rng, 10'000);
    ResidueSystem sys;
    std::map<std::uint64_t, std::uint64_t> classes;
    for (auto p : small) {
      if (uniform_below(rng, 3) == 0) continue;
      const auto a = uniform_below(rng, p);
      sys.set(p, static_cast<std::int64_t>(a));
      classes[p] = a;
    }
    const unsigned threads = 1 + static_cast<unsigned>(uniform_below(rng, 4));
    if (sift_interval(lo, hi, sys, threads).members() != oracle::sift(lo, hi, classes)) ++mismatches;
  }
  const double s = clock.seconds();
  return {mismatches == 0 && s < kSieveSeconds,
          std::to_string(mismatches) + " mismatches in 1000 cases, " + fmt("%.2f s", s)};
}

Outcome exact_numbers() {
  std::vector<std::string> bad;
  auto expect = [&](const char* what, std::uint64_t got, std::uint64_t want, std::uint64_t oracle_value) {
    if (got != want || oracle_value != want) bad.push_back(what);
  };
  const auto pl = oracle::primes_upto(1'000'000);
  expect("pi(10^6)", sieve_primes(1'000'000).size(), 78498, pl.size());
  const auto p100 = oracle::primes_upto(100);
  expect("G_1(100)", gk_direct(100, 1), 8, oracle::gk(p100, 1));
  expect("G_2(100)", gk_direct(100, 2), 6, oracle::gk(p100, 2));
  expect("G_1(10^6)", gk_direct(1'000'000, 1), 114, oracle::gk(pl, 1));
  expect("Psi(100,5)", smooth_count(100, 5).exact, 34, oracle::psi(100, 5));
  const std::vector<Congruence> cs{{1, 2}, {1, 3}, {2, 5}, {3, 7}};
  const auto crt = crt_combine(cs);
  const auto brute = oracle::crt({1, 1, 2, 3}, {2, 3, 5, 7});
  expect("CRT offset", crt.offset.to_u64(), 157, brute.first);
  expect("CRT modulus", crt.modulus.to_u64(), 210, brute.second);
  std::string detail = bad.empty() ? "7 values match" : "mismatch:";
  for (const auto& b : bad) detail += " " + b;
  return {bad.empty(), detail};
}

Outcome correlation_law() {
  Stopclock clock;
  Engine rng = make_engine(7, "acceptance-corr");
  const std::vector<std::vector<std::uint64_t>> sets{{3, 5, 7}, {5, 7, 11, 13}, {3, 7, 13, 17, 19}, {11, 13, 17}};
  const int draws = 100'000;
  double worst_z = 0;
  for (int t = 0; t < 20; ++t) {
    const auto& S = sets[t % sets.size()];
    std::set<std::int64_t> pts;
    while (pts.size() < 3) pts.insert(static_cast<std::int64_t>(uniform_below(rng, 1000)) - 500);
    const std::vector<std::int64_t> v(pts.begin(), pts.end());
    const double exact = correlation_probability(v, S).value;
    Engine draw_rng = make_engine(7, "acceptance-corr-abar", static_cast<std::uint64_t>(t));
    std::size_t hits = 0;
    for (int d = 0; d < draws; ++d) {
      const auto abar = sample_small_classes(S, draw_rng);
      bool all = true;
      for (auto n : v) all = all && sifted_membership(n, abar);
      hits += all;
    }
    const double freq = static_cast<double>(hits) / draws;
    const double se = std::sqrt(exact * (1 - exact) / draws);
    worst_z = std::max(worst_z, std::abs(freq - exact) / se);
  }
  double worst_sigma = 0;
  for (const auto& S : sets) {
    const std::vector<std::int64_t> one{12345};
    const double sigma = mertens_density(S).value;
    worst_sigma = std::max(worst_sigma, std::abs(correlation_probability(one, S).value - sigma) / sigma);
  }
  const double s = clock.seconds();
  return {worst_z <= kCorrelationSE && worst_sigma <= kSigmaRelTol && s < kCorrelationSeconds,
          fmt("worst |z| = %.2f", worst_z) + fmt(", t=1 rel err %.1e", worst_sigma) + fmt(", %.1f s", s)};
}

Outcome normalization() {
  const auto part = toy_partition();
  WeightOptions wo;
  const auto w = std::make_shared<const WeightTable>(build_weights(*part, first_primes_tuple(4), wo));
  double worst_norm = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ConstructionOptions co;
    co.seed = seed;
    const auto run = run_construction(part, w, co);
    worst_norm = std::max(worst_norm, check_normalization(run).max_relative_error);
  }
  const auto contract = weight_contract_report(*w, *part);
  const double worst_row = contract.max_row_sum_relative_error;
  return {worst_norm <= kNormalizationRelTol && worst_row <= kNormalizationRelTol,
          fmt("Z vs X rel err %.1e", worst_norm) + fmt(", row sums rel err %.1e", worst_row)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome covering_law() {
  Stopclock clock;
  const std::uint32_t N = 100'000, P = 10'000;
  bool ok = true;
  std::string detail;
  for (std::uint32_t m = 1; m <= 3; ++m) {
    const auto inst = synth_instance(N, P, m);
    const double target = std::pow(5.0, -static_cast<double>(m));
    std::vector<double> full, sub;
    for (std::uint64_t run = 0; run < 9; ++run) {
      Engine rng = make_engine(500 + run, "acceptance-cover", m);
      const auto res = nibble_cover(inst, m, rng);
      full.push_back(static_cast<double>(res.leftover.size()) / N);
      const auto q = random_subset(N, N / 10, rng);
      sub.push_back(static_cast<double>(subset_leftover(res, q, N)) / (N / 10));
    }
    const double f = median(full), g = median(sub);
    ok = ok && std::abs(f / target - 1) <= kLeftoverRelTol && std::abs(g / target - 1) <= kSubsetRelTol;
    detail += fmt("m=%.0f: ", m) + fmt("%.4f", f) + fmt(" / subset %.4f", g) + fmt(" vs %.4f; ", target);
  }
  const double s = clock.seconds();
  return {ok && s < kCoverSeconds, detail + fmt("%.1f s", s)};
}

Outcome weight_contracts() {
  const auto part = toy_partition();
  const auto w = build_weights(*part, first_primes_tuple(4), {});
  const auto rep = weight_contract_report(w, *part);
  return {rep.row_sum_max_over_min <= kRowSumRatio && rep.off_tuple_max_ratio <= kOffTupleRatio &&
              rep.max_point_mass <= kPointMass,
          fmt("row max/min %.6f", rep.row_sum_max_over_min) + fmt(", off/on %.4f", rep.off_tuple_max_ratio) +
              fmt(", point mass %.2e", rep.max_point_mass)};
}

Outcome maier_toy() {
  Stopclock clock;
  ParamOverrides o;
  o.y = 200;
  o.small_low = 3;
  o.small_high = 20;
  o.r = 2;
  const auto part = build_partition(derive_parameters(40, 0.1, 4, o));
  const auto sys = greedy_rankin(part, {});
  const auto T = sift_interval(part.x, part.y, sys);
  const auto frame = assemble_frame(sys, part, 1);
  Engine rng = make_engine(1, "chain");
  const auto search = find_gap_chain(frame, T, 2, 0.05, 2000, rng);
  if (!search.certificate) return {false, "no certificate in " + std::to_string(search.trials_used) + " rows"};
  const auto cert = certificate_from_json(certificate_to_json(*search.certificate));
  const auto v = verify_certificate(cert);
  const bool t1 = !verify_certificate(tamper_shift_prime(cert, 1)).accepted;
  const bool t2 = !verify_certificate(tamper_drop_evidence(cert, 0)).accepted;
  const bool t3 = !verify_certificate(tamper_inflate_gap(cert)).accepted;
  const double s = clock.seconds();
  std::string detail = v.accepted ? "certificate accepted" : "certificate rejected: " + v.reason;
  detail += ", min_gap " + std::to_string(cert.min_gap) + ", tamperings rejected " +
            std::to_string(t1 + t2 + t3) + "/3" + fmt(", %.1f s", s);
  return {v.accepted && t1 && t2 && t3 && s < kMaierSeconds, detail};
}

Outcome concentration() {
  const double alpha = 0.3, epsilon = 0.05, theta = 0.15;
  const auto groups = synthetic_bernoulli_groups(alpha, epsilon, 2000, 200, 99);
  const auto rep = concentration_check(groups, theta);
  const double bound = kChebyshevSlack * epsilon * alpha * alpha / (theta * theta);
  return {rep.violation_frequency <= bound,
          fmt("violation frequency %.4f", rep.violation_frequency) + fmt(" <= %.4f", bound) +
              fmt(" (estimated eps %.4f)", rep.epsilon)};
}

Outcome determinism() {
  std::string bad;
  for (auto mode : {Mode::primes, Mode::sieve, Mode::weights, Mode::construct, Mode::cover, Mode::maier, Mode::gk}) {
    auto c = toy_config(mode);
    c.seed = 31;
    const auto a = metrics_json(run_experiment(c));
    const auto b = metrics_json(run_experiment(c));
    if (a != b) bad += " " + to_string(mode);
  }
  return {bad.empty(), bad.empty() ? "7 toy modes byte-identical" : "differs:" + bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sieve oracle equivalence", sieve_equivalence},
      {"exact desk-scale numbers", exact_numbers},
      {"correlation law", correlation_law},
      {"normalization identities", normalization},
      {"covering leftover law", covering_law},
      {"weight contracts", weight_contracts},
      {"end-to-end Maier toy", maier_toy},
      {"concentration harness", concentration},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    failures += !out.passed;
    std::printf("%s %zu %s: %s\n", out.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
