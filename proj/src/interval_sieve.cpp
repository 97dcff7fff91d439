#include "gapchain/interval_sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "gapchain/core_math.hpp"
#include "gapchain/error.hpp"
#include "gapchain/primality.hpp"

namespace gapchain {

namespace {

std::uint64_t mod_i64(std::int64_t n, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  std::int64_t r = n % mm;
  return static_cast<std::uint64_t>(r < 0 ? r + mm : r);
}

// First n >= from with n == a (mod p).
std::uint64_t first_in_class(std::uint64_t from, std::uint64_t p, std::uint64_t a) {
  const std::uint64_t r = from % p;
  return from + (a + p - r) % p;
}

void clear_class(std::vector<std::uint64_t>& words, std::uint64_t base, std::uint64_t off_begin,
                 std::uint64_t off_end, std::uint64_t p, std::uint64_t a) {
  // Offsets o in [off_begin, off_end) represent n = base + o.
  for (std::uint64_t n = first_in_class(base + off_begin, p, a); n < base + off_end; n += p) {
    const std::uint64_t o = n - base;
    words[o >> 6] &= ~(1ULL << (o & 63));
  }
}

}  // namespace

void ResidueSystem::set(std::uint64_t p, std::int64_t a) {
  if (!is_prime_u64(p)) throw InvalidInput("ResidueSystem: modulus " + std::to_string(p) + " is not prime");
  if (p == excluded_) throw InvalidInput("ResidueSystem: modulus " + std::to_string(p) + " is the excluded prime");
  entries_[p] = mod_i64(a, p);
}

std::optional<std::uint64_t> ResidueSystem::class_of(std::uint64_t p) const {
  auto it = entries_.find(p);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool ResidueSystem::admits(std::uint64_t n) const {
  return std::none_of(entries_.begin(), entries_.end(), [n](const auto& e) { return n % e.first == e.second; });
}

SievedSet::SievedSet(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {
  if (hi < lo) throw InvalidInput("SievedSet: hi < lo");
  const std::uint64_t len = hi - lo;
  words_.assign((len + 63) / 64, ~0ULL);
  if (len % 64) words_.back() = (1ULL << (len % 64)) - 1;
  count_ = len;
}

bool SievedSet::contains(std::uint64_t n) const {
  if (n <= lo_ || n > hi_) return false;
  const std::uint64_t o = n - lo_ - 1;
  return (words_[o >> 6] >> (o & 63)) & 1;
}

bool SievedSet::remove(std::uint64_t n) {
  if (!contains(n)) return false;
  const std::uint64_t o = n - lo_ - 1;
  words_[o >> 6] &= ~(1ULL << (o & 63));
  --count_;
  return true;
}

std::uint64_t SievedSet::remove_class(std::uint64_t p, std::uint64_t a) {
  std::uint64_t removed = 0;
  for (std::uint64_t n = first_in_class(lo_ + 1, p, a % p); n <= hi_; n += p) removed += remove(n) ? 1 : 0;
  return removed;
}

std::uint64_t SievedSet::count_in(std::uint64_t a, std::uint64_t b) const {
  a = std::max(a, lo_ + 1);
  b = std::min(b, hi_);
  if (a > b) return 0;
  std::uint64_t total = 0;
  for (std::uint64_t n = a; n <= b;) {
    const std::uint64_t o = n - lo_ - 1;
    if ((o & 63) == 0 && n + 63 <= b) {
      total += static_cast<std::uint64_t>(std::popcount(words_[o >> 6]));
      n += 64;
    } else {
      total += (words_[o >> 6] >> (o & 63)) & 1;
      ++n;
    }
  }
  return total;
}

std::vector<std::uint64_t> SievedSet::members() const {
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  for_each([&](std::uint64_t n) { out.push_back(n); });
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> SievedSet::runs() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for_each([&](std::uint64_t n) {
    if (!out.empty() && out.back().first + out.back().second == n) {
      ++out.back().second;
    } else {
      out.emplace_back(n, 1);
    }
  });
  return out;
}

std::uint64_t SievedSet::recount() const {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

SievedSet sift_interval(std::uint64_t lo, std::uint64_t hi, const ResidueSystem& system, unsigned threads) {
  if (!(lo < hi)) throw InvalidInput("sift_interval: need lo < hi");
  SievedSet out(lo, hi);
  const std::uint64_t len = hi - lo;
  const std::uint64_t base = lo + 1;
  const std::uint64_t nwords = out.words_.size();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(nwords)));
  auto work = [&](std::uint64_t w_begin, std::uint64_t w_end) {
    const std::uint64_t o_begin = w_begin * 64;
    const std::uint64_t o_end = std::min(w_end * 64, len);
    for (const auto& [p, a] : system.entries()) clear_class(out.words_, base, o_begin, o_end, p, a);
  };
  if (threads == 1) {
    work(0, nwords);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (nwords + threads - 1) / threads;
    for (std::uint64_t w = 0; w < nwords; w += chunk) pool.emplace_back(work, w, std::min(nwords, w + chunk));
  }
  out.count_ = out.recount();
  return out;
}

bool sifted_membership(std::int64_t n, const SmallClassVector& abar) {
  for (std::size_t i = 0; i < abar.primes.size(); ++i) {
    if (mod_i64(n, abar.primes[i]) == abar.residues[i]) return false;
  }
  return true;
}

ResidueSystem assemble_full_system(const SmallClassVector& abar, const LargeShiftMap& nbar,
                                   const PrimePartition& partition) {
  if (abar.primes != partition.S || abar.residues.size() != abar.primes.size()) {
    throw InvalidInput("assemble_full_system: class vector is not indexed by S");
  }
  std::vector<std::uint64_t> missing;
  for (auto p : partition.P) {
    if (!nbar.contains(p)) missing.push_back(p);
  }
  std::vector<std::uint64_t> extra;
  for (const auto& [p, n] : nbar) {
    if (!partition.in_P(p)) extra.push_back(p);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "assemble_full_system: shift map must cover exactly P;";
    if (!missing.empty()) {
      msg += " missing";
      for (auto p : missing) msg += " " + std::to_string(p);
    }
    if (!extra.empty()) {
      msg += " unexpected";
      for (auto p : extra) msg += " " + std::to_string(p);
    }
    throw InvalidInput(msg);
  }
  ResidueSystem sys(partition.B0);
  for (std::size_t i = 0; i < abar.primes.size(); ++i) {
    sys.set(abar.primes[i], static_cast<std::int64_t>(abar.residues[i] % abar.primes[i]));
  }
  for (const auto& [p, n] : nbar) sys.set(p, n);
  for_each_prime(0, partition.x, [&](std::uint64_t p) {
    if (p != partition.B0 && !sys.class_of(p)) sys.set(p, 0);
  });
  return sys;
}

ResidualReport residual_smooth_set(const SievedSet& T, const PrimePartition& partition,
                                   const ResidualOptions& options) {
  ResidualReport rep;
  const auto& prm = partition.params;
  rep.smooth_bound = static_cast<std::uint64_t>(std::floor(std::max(prm.small_high, 1.0)));
  rep.u = std::log(prm.y) / std::log(prm.z);
  rep.bound = std::log(prm.x) * prm.y * std::exp(-rep.u * std::log(rep.u));
  T.for_each([&](std::uint64_t n) {
    if (partition.in_Q(n)) {
      ++rep.q_primes;
      return;
    }
    rep.R.push_back(n);
    if (is_smooth_times_power(n, rep.smooth_bound, partition.B0)) {
      ++rep.smooth_members;
    } else {
      rep.offenders.push_back(n);
    }
  });
  rep.dichotomy_holds = rep.offenders.empty();
  if (rep.q_primes + rep.R.size() != T.size()) throw Error("residual_smooth_set: partition of T does not add up");
  if (!rep.dichotomy_holds && options.strict) {
    throw Error("residual_smooth_set: survivor " + std::to_string(rep.offenders.front()) +
                " is neither a prime of Q nor smooth times a power of B0");
  }
  return rep;
}

ResidueSystem greedy_rankin(const PrimePartition& partition, const std::vector<std::uint64_t>& medium_primes) {
  for (auto m : medium_primes) {
    if (partition.in_S(m) || partition.in_P(m)) {
      throw InvalidInput("greedy_rankin: medium prime " + std::to_string(m) + " lies in S or P");
    }
    if (m > partition.x || m == partition.B0 || !is_prime_u64(m)) {
      throw InvalidInput("greedy_rankin: medium prime " + std::to_string(m) + " is not a sieving prime");
    }
  }
  std::vector<std::uint64_t> medium = medium_primes;
  std::sort(medium.begin(), medium.end());
  medium.erase(std::unique(medium.begin(), medium.end()), medium.end());

  ResidueSystem sys(partition.B0);
  SievedSet survivors(partition.x, partition.y);
  for_each_prime(0, partition.x, [&](std::uint64_t p) {
    if (p == partition.B0 || partition.in_S(p) || partition.in_P(p) ||
        std::binary_search(medium.begin(), medium.end(), p)) {
      return;
    }
    sys.set(p, 0);
    survivors.remove_class(p, 0);
  });
  std::vector<std::uint64_t> counts;
  auto greedy = [&](std::uint64_t p) {
    counts.assign(p, 0);
    survivors.for_each([&](std::uint64_t n) { ++counts[n % p]; });
    const auto best = static_cast<std::uint64_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    sys.set(p, static_cast<std::int64_t>(best));
    survivors.remove_class(p, best);
  };
  for (auto s : partition.S) greedy(s);
  for (auto m : medium) greedy(m);
  for (auto p : partition.P) greedy(p);
  return sys;
}

ShortIntervalReport short_interval_report(const SievedSet& T, const PrimePartition& partition, double K,
                                          double epsilon) {
  if (!(epsilon > 0 && epsilon <= 1)) throw InvalidInput("short_interval_report: epsilon must lie in (0, 1]");
  ShortIntervalReport rep;
  rep.epsilon = epsilon;
  rep.K = K;
  const double y = partition.params.y;
  const double total = static_cast<double>(T.size());
  rep.size_ratio = total * std::log(partition.params.x) / (partition.params.A * partition.params.x);
  if (T.empty()) return rep;
  auto check = [&](double alpha, double beta) {
    const auto a = static_cast<std::uint64_t>(std::ceil(alpha * y));
    const auto b = static_cast<std::uint64_t>(std::floor(beta * y));
    const double count = static_cast<double>(T.count_in(a, b));
    const double ratio = count / ((std::abs(beta - alpha) + epsilon) * total);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_alpha = alpha;
      rep.worst_beta = beta;
    }
  };
  const auto windows = static_cast<std::uint64_t>(std::ceil(1.0 / epsilon));
  for (std::uint64_t k = 0; k < windows; ++k) {
    check(static_cast<double>(k) * epsilon, std::min(1.0, static_cast<double>(k + 1) * epsilon));
  }
  check(0.0, 1.0);
  rep.passed = rep.worst_ratio <= K;
  return rep;
}

}  // namespace gapchain
