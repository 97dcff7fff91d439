#include "gapchain/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "gapchain/core_math.hpp"
#include "gapchain/error.hpp"
#include "gapchain/primality.hpp"

namespace gapchain {

namespace {

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

struct BaseDivisor {
  std::uint64_t d;
  int mu;
  double log_d;
};

std::vector<BaseDivisor> squarefree_below(double R, std::uint64_t r, std::uint64_t B0) {
  std::vector<std::uint64_t> primes;
  for (auto p : sieve_primes(static_cast<std::uint64_t>(std::ceil(R))).primes) {
    if (p > r && p != B0 && static_cast<double>(p) < R) primes.push_back(p);
  }
  std::vector<BaseDivisor> out;
  auto rec = [&](auto&& self, std::size_t from, std::uint64_t d, int mu) -> void {
    out.push_back({d, mu, std::log(static_cast<double>(d))});
    for (std::size_t j = from; j < primes.size(); ++j) {
      if (static_cast<double>(d * primes[j]) >= R) break;
      self(self, j + 1, d * primes[j], -mu);
    }
  };
  rec(rec, 0, 1, 1);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.d < b.d; });
  return out;
}

}  // namespace

bool AdmissibleTuple::within_square_range() const {
  const auto bound = static_cast<std::int64_t>(2 * r() * r());
  return std::all_of(h.begin(), h.end(), [bound](std::int64_t v) { return v >= 0 && v <= bound; });
}

bool is_admissible(std::span<const std::int64_t> h) {
  const std::uint64_t len = h.size();
  for (auto p : sieve_primes(len).primes) {
    std::vector<char> hit(p, 0);
    for (auto v : h) hit[static_cast<std::size_t>(mod_pos(v, static_cast<std::int64_t>(p)))] = 1;
    if (std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; })) return false;
  }
  return true;
}

AdmissibleTuple first_primes_tuple(std::uint64_t r) {
  if (r < 1) throw InvalidInput("first_primes_tuple: r must be >= 1");
  AdmissibleTuple t;
  // p_{pi(r)+r} < 2 r log r + 3 r comfortably for every r >= 1.
  std::uint64_t hi = 2 * r * static_cast<std::uint64_t>(std::log(static_cast<double>(r)) + 2) + 10;
  std::vector<std::uint64_t> primes;
  while ((primes = primes_in_range(r, hi)).size() < r) hi *= 2;
  for (std::uint64_t i = 0; i < r; ++i) t.h.push_back(static_cast<std::int64_t>(primes[i]));
  if (!is_admissible(t.h)) throw Error("first_primes_tuple: constructed tuple is not admissible");
  return t;
}

const char* to_string(WeightKind k) { return k == WeightKind::uniform ? "uniform" : "maynard"; }

WeightKind weight_kind_from_string(const std::string& s) {
  if (s == "uniform") return WeightKind::uniform;
  if (s == "maynard") return WeightKind::maynard;
  throw InvalidInput("unknown weight kind '" + s + "'");
}

std::vector<DivisorTuple> maynard_divisor_tuples(std::size_t r, double R, std::uint64_t B0) {
  const auto base = squarefree_below(R, r, B0);
  const double logR = std::log(R);
  std::vector<DivisorTuple> out;
  std::vector<std::uint64_t> ds;
  auto rec = [&](auto&& self, std::size_t i, std::uint64_t prod, int mu, double logs) -> void {
    if (i == r) {
      const double t = logs / logR;
      out.push_back({ds, mu * std::pow(std::max(1.0 - t, 0.0), static_cast<double>(r))});
      return;
    }
    for (const auto& b : base) {
      if (static_cast<double>(prod * b.d) >= R) break;
      if (std::gcd(prod, b.d) != 1) continue;
      ds.push_back(b.d);
      self(self, i + 1, prod * b.d, mu * b.mu, logs + b.log_d);
      ds.pop_back();
    }
  };
  rec(rec, 0, 1, 1, 0.0);
  return out;
}

CompensatedSum compensated_sum(std::span<const double> terms) {
  double sum = 0;
  double c = 0;
  double abs_total = 0;
  for (double v : terms) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
    abs_total += std::abs(v);
  }
  constexpr double u = 0x1.0p-53;
  const double n = static_cast<double>(terms.size());
  CompensatedSum out;
  out.value = sum + c;
  out.error_bound = 2 * u * std::abs(out.value) + 4 * n * n * u * u * abs_total;
  return out;
}

double WeightRow::weight(std::int64_t at) const {
  auto it = std::lower_bound(n.begin(), n.end(), at);
  if (it == n.end() || *it != at) return 0.0;
  return w[static_cast<std::size_t>(it - n.begin())];
}

const WeightRow& WeightTable::row(std::uint64_t p) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), p, [](const WeightRow& r, std::uint64_t v) { return r.p < v; });
  if (it == rows_.end() || it->p != p) throw InvalidInput("WeightTable: no row for p = " + std::to_string(p));
  return *it;
}

double WeightTable::probability(std::uint64_t p, std::int64_t n) const {
  const auto& r = row(p);
  return r.sum > 0 ? r.weight(n) / r.sum : 0.0;
}

WeightTable build_weights(const PrimePartition& partition, const AdmissibleTuple& tuple, const WeightOptions& options) {
  if (!(options.theta > 0)) throw InvalidInput("build_weights: theta must be positive");
  const std::size_t r = tuple.r();
  if (r < 1 || r > options.r_cap) {
    throw InvalidInput("build_weights: tuple length " + std::to_string(r) + " outside [1, " +
                       std::to_string(options.r_cap) + "]");
  }
  if (!std::is_sorted(tuple.h.begin(), tuple.h.end()) ||
      std::adjacent_find(tuple.h.begin(), tuple.h.end()) != tuple.h.end() || !is_admissible(tuple.h)) {
    throw InvalidInput("build_weights: tuple must be strictly increasing and admissible");
  }
  if (partition.P.empty()) throw InvalidInput("build_weights: P is empty");

  WeightTable t;
  t.kind_ = options.kind;
  t.theta_ = options.theta;
  t.level_ = std::pow(partition.params.x, options.theta);
  t.tuple_ = tuple;
  t.x_ = partition.x;
  t.y_ = partition.y;
  t.B0_ = partition.B0;

  const auto local_primes = sieve_primes(r).primes;
  t.local_modulus_ = std::accumulate(local_primes.begin(), local_primes.end(), std::uint64_t{1},
                                     std::multiplies<>());
  const auto x = static_cast<std::int64_t>(partition.x);
  const auto y = static_cast<std::int64_t>(partition.y);
  const std::int64_t span = tuple.h.back() - tuple.h.front();
  const auto p_max = static_cast<std::int64_t>(partition.P.back());
  std::int64_t L = y - x - span * p_max;
  L -= L % static_cast<std::int64_t>(t.local_modulus_);
  if (L <= 0) {
    throw InvalidInput("build_weights: tuple span " + std::to_string(span) + " too wide for (x, y] = (" +
                       std::to_string(x) + ", " + std::to_string(y) + "]");
  }
  t.window_length_ = static_cast<std::uint64_t>(L);
  for (auto p : partition.P) {
    const std::int64_t lo = x + 1 - tuple.h.front() * static_cast<std::int64_t>(p);
    if (lo < -y || lo + L - 1 > y) throw InvalidInput("build_weights: support window leaves [-y, y]");
  }

  std::vector<DivisorTuple> divisors;
  if (options.kind == WeightKind::maynard) {
    divisors = maynard_divisor_tuples(r, t.level_, partition.B0);
  }
  t.divisor_tuples_ = divisors.size();

  t.rows_.resize(partition.P.size());
  auto build_row = [&](std::size_t k) {
    const auto p = static_cast<std::int64_t>(partition.P[k]);
    const std::int64_t lo = x + 1 - tuple.h.front() * p;
    std::vector<double> acc;
    if (options.kind == WeightKind::maynard) {
      acc.assign(static_cast<std::size_t>(L), 0.0);
      for (const auto& dt : divisors) {
        // n == -h_i p (mod d_i) for every i, combined by CRT.
        std::int64_t a = 0;
        std::int64_t M = 1;
        for (std::size_t i = 0; i < r; ++i) {
          const auto d = static_cast<std::int64_t>(dt.d[i]);
          if (d == 1) continue;
          const std::int64_t target = mod_pos(-tuple.h[i] * p, d);
          std::int64_t step = 0;
          while (mod_pos(a + M * step, d) != target) ++step;  // d < R is small
          a += M * step;
          M *= d;
        }
        for (auto j = mod_pos(a - lo, M); j < L; j += M) acc[static_cast<std::size_t>(j)] += dt.lambda;
      }
    }
    WeightRow row;
    row.p = partition.P[k];
    for (std::int64_t j = 0; j < L; ++j) {
      const std::int64_t n = lo + j;
      bool local_ok = true;
      for (auto ell : local_primes) {
        for (auto hi : tuple.h) {
          if (mod_pos(n + hi * p, static_cast<std::int64_t>(ell)) == 0) local_ok = false;
        }
      }
      if (!local_ok) continue;
      const double w = options.kind == WeightKind::uniform ? 1.0 : acc[static_cast<std::size_t>(j)] * acc[static_cast<std::size_t>(j)];
      if (w <= 0) continue;
      row.n.push_back(n);
      row.w.push_back(w);
    }
    const auto cs = compensated_sum(row.w);
    row.sum = cs.value;
    row.sum_error_bound = cs.error_bound;
    row.cumulative.resize(row.w.size());
    std::partial_sum(row.w.begin(), row.w.end(), row.cumulative.begin());
    t.rows_[k] = std::move(row);
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    for (std::size_t k = 0; k < partition.P.size(); ++k) build_row(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < partition.P.size(); k += threads) build_row(k);
      });
    }
  }
  return t;
}

ContractReport weight_contract_report(const WeightTable& table, const PrimePartition& partition,
                                      const ContractOptions& options) {
  ContractReport rep;
  const auto& rows = table.rows();
  if (rows.empty()) return rep;
  const auto& h = table.tuple().h;
  const std::size_t r = h.size();

  // (a)
  rep.row_sum_min = rows.front().sum;
  rep.row_sum_max = rows.front().sum;
  double total = 0;
  for (const auto& row : rows) {
    rep.row_sum_min = std::min(rep.row_sum_min, row.sum);
    rep.row_sum_max = std::max(rep.row_sum_max, row.sum);
    total += row.sum;
    long double plain = 0;
    for (double w : row.w) plain += w;
    if (row.sum > 0) {
      rep.max_row_sum_relative_error =
          std::max(rep.max_row_sum_relative_error,
                   static_cast<double>(std::abs(plain - static_cast<long double>(row.sum)) / row.sum));
    }
  }
  rep.row_sum_mean = total / static_cast<double>(rows.size());
  rep.row_sum_max_over_min = rep.row_sum_min > 0 ? rep.row_sum_max / rep.row_sum_min : INFINITY;
  rep.row_sum_dispersion = rep.row_sum_mean > 0 ? (rep.row_sum_max - rep.row_sum_min) / rep.row_sum_mean : 0;

  // (b)
  const auto& Q = partition.Q;
  const std::size_t stride = std::max<std::size_t>(1, (Q.size() + options.q_samples - 1) / std::max<std::size_t>(1, options.q_samples));
  std::vector<double> sums;
  for (std::size_t k = 0; k < Q.size(); k += stride) {
    const auto q = static_cast<std::int64_t>(Q[k]);
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0;
      for (const auto& row : rows) {
        if (row.sum > 0) s += row.weight(q - h[i] * static_cast<std::int64_t>(row.p)) / row.sum;
      }
      sums.push_back(s);
    }
    ++rep.q_sampled;
  }
  if (!sums.empty()) {
    double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / static_cast<double>(sums.size());
    double var = 0;
    for (double s : sums) var += (s - mean) * (s - mean);
    var /= static_cast<double>(sums.size());
    rep.tuple_sum_mean = mean;
    rep.tuple_sum_min = *std::min_element(sums.begin(), sums.end());
    rep.tuple_sum_max = *std::max_element(sums.begin(), sums.end());
    rep.tuple_sum_cv = mean > 0 ? std::sqrt(var) / mean : 0;
    rep.u_empirical = 2.0 * partition.params.y / partition.params.x * static_cast<double>(r) * mean;
  }

  // (c)
  const std::uint64_t x = partition.x;
  std::vector<char> in_q(partition.y - x + 1, 0);
  for (auto q : Q) in_q[q - x] = 1;
  auto aggregate = [&](std::int64_t shift) {
    double a = 0;
    for (const auto& row : rows) {
      if (row.sum <= 0) continue;
      double part = 0;
      for (std::size_t j = 0; j < row.n.size(); ++j) {
        const std::int64_t q = row.n[j] + shift * static_cast<std::int64_t>(row.p);
        if (q > static_cast<std::int64_t>(x) && q <= static_cast<std::int64_t>(partition.y) && in_q[static_cast<std::size_t>(q) - x]) {
          part += row.w[j];
        }
      }
      a += part / row.sum;
    }
    return a;
  };
  double on = 0;
  for (auto hi : h) on += aggregate(hi);
  rep.on_tuple_scale = on / static_cast<double>(r);
  const auto H = static_cast<std::int64_t>(std::floor(partition.params.y / partition.params.x));
  std::vector<std::int64_t> shifts;
  for (std::int64_t s = -H; s <= H; ++s) {
    if (std::find(h.begin(), h.end(), s) == h.end()) shifts.push_back(s);
  }
  if (shifts.size() > options.h_samples && options.h_samples > 0) {
    std::vector<std::int64_t> kept;
    const double step = static_cast<double>(shifts.size()) / static_cast<double>(options.h_samples);
    for (std::size_t k = 0; k < options.h_samples; ++k) kept.push_back(shifts[static_cast<std::size_t>(static_cast<double>(k) * step)]);
    shifts = std::move(kept);
  }
  rep.off_tuple_shifts = shifts.size();
  double ratio_sum = 0;
  for (auto s : shifts) {
    const double ratio = rep.on_tuple_scale > 0 ? aggregate(s) / rep.on_tuple_scale : 0;
    ratio_sum += ratio;
    if (ratio > rep.off_tuple_max_ratio || (ratio == rep.off_tuple_max_ratio && rep.off_tuple_worst_h == 0)) {
      rep.off_tuple_max_ratio = ratio;
      rep.off_tuple_worst_h = s;
    }
  }
  rep.off_tuple_mean_ratio = shifts.empty() ? 0 : ratio_sum / static_cast<double>(shifts.size());

  // (d)
  for (const auto& row : rows) {
    if (row.sum <= 0) continue;
    for (double w : row.w) rep.max_point_mass = std::max(rep.max_point_mass, w / row.sum);
    if (row.w.size() == 1) rep.has_point_mass_row = true;
  }
  return rep;
}

std::int64_t sample_n_tilde(const WeightTable& table, std::uint64_t p, Engine& rng) {
  const auto& row = table.row(p);
  if (row.w.empty() || !(row.sum > 0)) throw InvalidInput("sample_n_tilde: row for p = " + std::to_string(p) + " is zero");
  const double target = uniform01(rng) * row.cumulative.back();
  auto it = std::upper_bound(row.cumulative.begin(), row.cumulative.end(), target);
  if (it == row.cumulative.end()) --it;
  return row.n[static_cast<std::size_t>(it - row.cumulative.begin())];
}

}  // namespace gapchain
