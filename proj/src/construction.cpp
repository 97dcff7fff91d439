#include "gapchain/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gapchain/error.hpp"

namespace gapchain {

namespace {

bool shifts_survive(const SmallClassVector& abar, const std::vector<std::int64_t>& h, std::int64_t n, std::int64_t p) {
  for (auto hj : h) {
    if (!sifted_membership(n + hj * p, abar)) return false;
  }
  return true;
}

std::size_t index_of(const std::vector<std::uint64_t>& P, std::uint64_t p) {
  auto it = std::lower_bound(P.begin(), P.end(), p);
  if (it == P.end() || *it != p) throw InvalidInput("construction: " + std::to_string(p) + " is not in P");
  return static_cast<std::size_t>(it - P.begin());
}

}  // namespace

SmallClassVector sample_small_classes(std::span<const std::uint64_t> S, Engine& rng) {
  SmallClassVector out;
  out.primes.assign(S.begin(), S.end());
  out.residues.reserve(S.size());
  for (auto s : S) out.residues.push_back(uniform_below(rng, s));
  return out;
}

SurvivalProbability correlation_probability(std::span<const std::int64_t> points, std::span<const std::uint64_t> S) {
  if (points.empty()) throw InvalidInput("correlation_probability: need at least one point");
  std::set<std::int64_t> distinct(points.begin(), points.end());
  if (distinct.size() != points.size()) throw InvalidInput("correlation_probability: points must be distinct");
  SurvivalProbability out;
  mpz_class num = 1;
  mpz_class den = 1;
  std::set<std::int64_t> classes;
  for (auto s : S) {
    classes.clear();
    const auto ss = static_cast<std::int64_t>(s);
    for (auto n : points) classes.insert(((n % ss) + ss) % ss);
    num *= static_cast<unsigned long>(s - classes.size());
    den *= static_cast<unsigned long>(s);
  }
  out.exact = mpq_class(num, den);
  out.exact.canonicalize();
  out.value = out.exact.get_d();
  return out;
}

double compute_Xp(const SmallClassVector& abar, const WeightTable& weights, std::uint64_t p) {
  const auto& row = weights.row(p);
  if (!(row.sum > 0)) throw InvalidInput("compute_Xp: zero row for p = " + std::to_string(p));
  std::vector<double> terms;
  terms.reserve(row.n.size());
  const auto& h = weights.tuple().h;
  for (std::size_t j = 0; j < row.n.size(); ++j) {
    if (shifts_survive(abar, h, row.n[j], static_cast<std::int64_t>(p))) terms.push_back(row.w[j]);
  }
  return compensated_sum(terms).value / row.sum;
}

double z_mass(const SmallClassVector& abar, const WeightTable& weights, std::uint64_t p, std::int64_t n) {
  const auto& row = weights.row(p);
  const double w = row.weight(n);
  if (w == 0 || !(row.sum > 0)) return 0;
  return shifts_survive(abar, weights.tuple().h, n, static_cast<std::int64_t>(p)) ? w / row.sum : 0;
}

std::size_t ConstructionRun::good_count() const {
  return static_cast<std::size_t>(std::count(good.begin(), good.end(), 1));
}

bool ConstructionRun::is_good(std::uint64_t p) const { return good[index_of(partition->P, p)] != 0; }

double ConstructionRun::X(std::uint64_t p) const { return Xp[index_of(partition->P, p)]; }

std::vector<std::uint64_t> select_good_P(const ConstructionRun& run) {
  std::vector<std::uint64_t> out;
  const auto& P = run.partition->P;
  for (std::size_t k = 0; k < P.size(); ++k) {
    const double dev = std::abs(run.Xp[k] / run.sigma_r - 1.0);
    if (std::isinf(run.eta) || dev <= run.eta) out.push_back(P[k]);
  }
  return out;
}

ConditionalLaw conditional_law(const ConstructionRun& run, std::uint64_t p) {
  const auto& row = run.weights->row(p);
  const auto& h = run.weights->tuple().h;
  ConditionalLaw law;
  double acc = 0;
  for (std::size_t j = 0; j < row.n.size(); ++j) {
    if (!shifts_survive(run.abar, h, row.n[j], static_cast<std::int64_t>(p))) continue;
    acc += row.w[j];
    law.cumulative.push_back(acc);
    law.support.push_back(row.n[j]);
  }
  if (law.support.empty()) throw InvalidInput("conditional_law: X_p = 0 for p = " + std::to_string(p));
  return law;
}

std::int64_t draw(const ConditionalLaw& law, Engine& rng) {
  const double target = uniform01(rng) * law.cumulative.back();
  auto it = std::upper_bound(law.cumulative.begin(), law.cumulative.end(), target);
  if (it == law.cumulative.end()) --it;
  return law.support[static_cast<std::size_t>(it - law.cumulative.begin())];
}

std::int64_t sample_np(const ConstructionRun& run, std::uint64_t p, Engine& rng) {
  if (!run.is_good(p)) return 0;
  return draw(conditional_law(run, p), rng);
}

ConstructionRun run_construction(std::shared_ptr<const PrimePartition> partition,
                                 std::shared_ptr<const WeightTable> weights, const ConstructionOptions& options) {
  if (!partition || !weights) throw InvalidInput("run_construction: missing partition or weights");
  if (weights->rows().size() != partition->P.size()) throw InvalidInput("run_construction: weights do not match P");
  ConstructionRun run;
  run.partition = partition;
  run.weights = weights;
  run.seed = options.seed;
  run.eta = options.eta;
  run.sigma = partition->sigma;
  run.sigma_r = std::pow(run.sigma, static_cast<double>(weights->tuple().r()));

  Engine abar_rng = make_engine(options.seed, "abar");
  run.abar = sample_small_classes(partition->S, abar_rng);

  const auto& P = partition->P;
  run.Xp.resize(P.size());
  for (std::size_t k = 0; k < P.size(); ++k) run.Xp[k] = compute_Xp(run.abar, *weights, P[k]);
  run.good.assign(P.size(), 0);
  for (auto p : select_good_P(run)) run.good[index_of(P, p)] = 1;
  for (std::size_t k = 0; k < P.size(); ++k) {
    Engine rng = make_engine(options.seed, "np", P[k]);
    run.npbar[P[k]] = run.good[k] ? sample_np(run, P[k], rng) : 0;
  }
  return run;
}

NormalizationReport check_normalization(const ConstructionRun& run) {
  NormalizationReport rep;
  for (const auto& row : run.weights->rows()) {
    if (row.n.empty()) continue;
    // Dense scan over the row's window, independent of the sparse iteration
    // compute_Xp uses.
    long double total = 0;
    for (std::int64_t n = row.n.front(); n <= row.n.back(); ++n) {
      total += z_mass(run.abar, *run.weights, row.p, n);
    }
    const double x = run.X(row.p);
    const double err = x > 0 ? static_cast<double>(std::abs(total - static_cast<long double>(x)) / x)
                             : static_cast<double>(std::abs(total));
    rep.max_relative_error = std::max(rep.max_relative_error, err);
    ++rep.rows_checked;
  }
  return rep;
}

GoodnessReport goodness_report(const ConstructionRun& run, double C_target, const GoodnessOptions& options) {
  GoodnessReport rep;
  rep.C_target = C_target;
  const auto& part = *run.partition;
  const auto& w = *run.weights;
  const auto& h = w.tuple().h;
  std::vector<std::uint64_t> survivors;
  for (auto q : part.Q) {
    if (sifted_membership(static_cast<std::int64_t>(q), run.abar)) survivors.push_back(q);
  }
  rep.q_population = survivors.size();
  rep.good_count = run.good_count();
  rep.good_complement_fraction =
      part.P.empty() ? 0 : 1.0 - static_cast<double>(rep.good_count) / static_cast<double>(part.P.size());
  if (survivors.empty()) return rep;

  std::vector<std::uint64_t> good_primes;
  for (std::size_t k = 0; k < part.P.size(); ++k) {
    if (run.good[k]) good_primes.push_back(part.P[k]);
  }
  const auto H = static_cast<std::int64_t>(std::floor(part.params.y / part.params.x));
  std::vector<std::int64_t> off;
  for (std::int64_t s = -H; s <= H; ++s) {
    if (std::find(h.begin(), h.end(), s) == h.end()) off.push_back(s);
  }
  const std::size_t stride =
      std::max<std::size_t>(1, (survivors.size() + options.q_samples - 1) / std::max<std::size_t>(1, options.q_samples));
  for (std::size_t k = 0; k < survivors.size(); k += stride) {
    const auto q = static_cast<std::int64_t>(survivors[k]);
    double main = 0;
    double error = 0;
    for (auto p : good_primes) {
      const auto pp = static_cast<std::int64_t>(p);
      for (auto hi : h) main += z_mass(run.abar, w, p, q - hi * pp);
      for (auto s : off) error += z_mass(run.abar, w, p, q - s * pp);
    }
    rep.q.push_back(survivors[k]);
    rep.main.push_back(main / run.sigma_r);
    rep.error.push_back(error / run.sigma_r);
  }
  rep.q_sampled = rep.q.size();
  const double n = static_cast<double>(rep.q_sampled);
  rep.main_mean = std::accumulate(rep.main.begin(), rep.main.end(), 0.0) / n;
  rep.main_min = *std::min_element(rep.main.begin(), rep.main.end());
  rep.main_max = *std::max_element(rep.main.begin(), rep.main.end());
  double var = 0;
  for (double m : rep.main) var += (m - rep.main_mean) * (m - rep.main_mean);
  rep.main_cv = rep.main_mean > 0 ? std::sqrt(var / n) / rep.main_mean : 0;
  rep.main_over_target = C_target > 0 ? rep.main_mean / C_target : 0;
  rep.error_mean = std::accumulate(rep.error.begin(), rep.error.end(), 0.0) / n;
  rep.error_max = *std::max_element(rep.error.begin(), rep.error.end());
  std::size_t above = 0;
  for (std::size_t k = 0; k < rep.q_sampled; ++k) {
    if (rep.error[k] > rep.main[k] / 10) ++above;
  }
  rep.fraction_error_above_tenth = static_cast<double>(above) / n;
  return rep;
}

}  // namespace gapchain
