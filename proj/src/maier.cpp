#include "gapchain/maier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <thread>

#include "gapchain/core_math.hpp"
#include "gapchain/error.hpp"

namespace gapchain {

BigNat primorial_over(std::uint64_t x, std::uint64_t B0) {
  mpz_class P = 1;
  for (auto p : primes_in_range(0, x)) {
    if (p != B0) P *= static_cast<unsigned long>(p);
  }
  return BigNat(P);
}

MaierFrame assemble_frame(const ResidueSystem& system, const PrimePartition& partition, unsigned D) {
  if (D < 1) throw InvalidInput("assemble_frame: D must be at least 1");
  MaierFrame frame;
  frame.x = partition.x;
  frame.y = partition.y;
  frame.B0 = partition.B0;
  frame.D = D;
  frame.system = system;
  if (system.excluded() != partition.B0) throw InvalidInput("assemble_frame: system and partition disagree on B0");

  std::vector<Congruence> congruences;
  std::vector<std::uint64_t> missing;
  for (auto p : primes_in_range(0, frame.x)) {
    if (p == frame.B0) continue;
    auto a = system.class_of(p);
    if (!a) {
      missing.push_back(p);
      continue;
    }
    congruences.push_back({BigNat((p - *a) % p), BigNat(p)});
  }
  if (!missing.empty()) {
    throw InvalidInput("assemble_frame: no class for prime " + std::to_string(missing.front()) + " (" +
                       std::to_string(missing.size()) + " missing)");
  }
  if (congruences.size() != system.size()) {
    throw InvalidInput("assemble_frame: system has classes for primes above x");
  }
  const auto crt = crt_combine(congruences);
  frame.P = primorial_over(frame.x, frame.B0);
  if (!(crt.modulus == frame.P)) throw Error("assemble_frame: CRT modulus differs from P(x)/B0");
  frame.m = crt.offset % frame.P;
  return frame;
}

SoundnessReport frame_soundness(const MaierFrame& frame, const SievedSet& T, std::size_t samples, Engine& rng) {
  std::vector<std::uint64_t> complement;
  for (std::uint64_t t = frame.x + 1; t <= frame.y; ++t) {
    if (!T.contains(t)) complement.push_back(t);
  }
  std::vector<std::uint64_t> picks;
  if (complement.size() <= samples) {
    picks = complement;
  } else {
    for (std::size_t i = 0; i < samples; ++i) picks.push_back(complement[uniform_below(rng, complement.size())]);
  }
  SoundnessReport rep;
  for (auto t : picks) {
    ++rep.checked;
    if (gcd(frame.m + BigNat(t), frame.P) == BigNat(1)) {
      rep.failure = t;
      break;
    }
  }
  return rep;
}

mpz_class uniform_big_below(Engine& rng, const mpz_class& bound) {
  if (bound <= 0) throw InvalidInput("uniform_big_below: bound must be positive");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const unsigned top = static_cast<unsigned>(bits % 64);
  std::vector<std::uint64_t> buf(words);
  mpz_class out;
  do {
    for (auto& w : buf) w = rng();
    if (top != 0) buf.back() &= (std::uint64_t{1} << top) - 1;
    mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
  } while (out >= bound);
  return out;
}

namespace {

mpz_class row_bound(const MaierFrame& frame) {
  mpz_class Z;
  mpz_pow_ui(Z.get_mpz_t(), frame.P.mpz().get_mpz_t(), frame.D);
  return Z;
}

void check_budget(const MaierFrame& frame, const mpz_class& Z, std::size_t max_bits) {
  const mpz_class top = Z * frame.P.mpz() + frame.m.mpz() + frame.y;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  if (bits > max_bits) {
    throw InvalidInput("row numbers need " + std::to_string(bits) + " bits, over the budget of " +
                       std::to_string(max_bits) + "; use a smaller x or D");
  }
}

mpz_class draw_z(Engine& rng, const mpz_class& Z) { return uniform_big_below(rng, Z) + 1; }

// Hit pattern of T in row z.
std::vector<char> row_hits(const MaierFrame& frame, const std::vector<std::uint64_t>& T, const mpz_class& z,
                           const PrimalityPolicy& policy) {
  const mpz_class base = z * frame.P.mpz() + frame.m.mpz();
  std::vector<char> hit(T.size(), 0);
  for (std::size_t i = 0; i < T.size(); ++i) {
    hit[i] = is_prime(BigNat(mpz_class(base + T[i])), policy).is_prime_like() ? 1 : 0;
  }
  return hit;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) body(i);
    });
  }
}

}  // namespace

RowStatistics sample_rows(const MaierFrame& frame, const SievedSet& T, std::size_t trials, Engine& rng,
                          const MaierOptions& options) {
  if (trials < 1) throw InvalidInput("sample_rows: trials must be positive");
  const mpz_class Z = row_bound(frame);
  check_budget(frame, Z, options.max_bits);
  const std::uint64_t root = rng();
  const auto members = T.members();

  std::vector<std::vector<char>> hits(trials);
  parallel_for(trials, options.threads, [&](std::size_t i) {
    Engine r = make_engine(root, "row", i);
    hits[i] = row_hits(frame, members, draw_z(r, Z), options.policy);
  });

  RowStatistics st;
  st.trials = trials;
  st.z_bits = mpz_sizeinbase(Z.get_mpz_t(), 2);
  std::vector<double> counts(members.size(), 0);
  double sum = 0;
  double sum_sq = 0;
  for (const auto& h : hits) {
    double n = 0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      counts[j] += h[j];
      n += h[j];
    }
    sum += n;
    sum_sq += n * n;
  }
  const double tn = static_cast<double>(trials);
  st.mean_N = sum / tn;
  st.var_N = trials > 1 ? std::max(0.0, (sum_sq - tn * st.mean_N * st.mean_N) / (tn - 1)) : 0.0;
  for (std::size_t j = 0; j < members.size(); ++j) st.per_a.emplace_back(members[j], counts[j] / tn);
  if (!members.empty()) st.singleton_rate = sum / tn / static_cast<double>(members.size());

  if (members.size() >= 2) {
    Engine pr = make_engine(root, "pairs");
    for (std::size_t s = 0; s < options.pair_samples; ++s) {
      std::size_t i = uniform_below(pr, members.size());
      std::size_t j = uniform_below(pr, members.size() - 1);
      if (j >= i) ++j;
      if (i > j) std::swap(i, j);
      double both = 0;
      for (const auto& h : hits) both += (h[i] && h[j]) ? 1 : 0;
      st.pairs.push_back({members[i], members[j], both / tn});
      st.pair_mean += both / tn;
    }
    st.pair_mean /= static_cast<double>(st.pairs.size());
    if (st.singleton_rate > 0) st.pair_ratio = st.pair_mean / (st.singleton_rate * st.singleton_rate);
  }
  return st;
}

std::string to_string(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::gcd_with_P: return "gcd_with_P";
    case EvidenceKind::trial_factor: return "trial_factor";
    case EvidenceKind::mr_witness: return "mr_witness";
  }
  return "?";
}

EvidenceKind evidence_kind_from_string(const std::string& name) {
  if (name == "gcd_with_P") return EvidenceKind::gcd_with_P;
  if (name == "trial_factor") return EvidenceKind::trial_factor;
  if (name == "mr_witness") return EvidenceKind::mr_witness;
  throw InvalidInput("unknown evidence kind '" + name + "'");
}

namespace {

struct ChainPick {
  std::size_t start = 0;  // index into the row's prime list
  std::uint64_t min_gap = 0;
  bool found = false;
};

// Best run of k + 1 consecutive primes by smallest gap.
ChainPick best_chain(const std::vector<std::uint64_t>& primes, unsigned k) {
  ChainPick best;
  if (primes.size() < k + 1) return best;
  for (std::size_t s = 0; s + k < primes.size(); ++s) {
    std::uint64_t g = UINT64_MAX;
    for (std::size_t j = s; j < s + k; ++j) g = std::min(g, primes[j + 1] - primes[j]);
    if (!best.found || g > best.min_gap) best = {s, g, true};
  }
  return best;
}

GapChainCertificate build_certificate(const MaierFrame& frame, const mpz_class& z, unsigned k, double epsilon,
                                      const std::vector<std::uint64_t>& chain, std::uint64_t seed,
                                      const PrimalityPolicy& policy) {
  GapChainCertificate cert;
#ifdef GAPCHAIN_VERSION
  cert.library_version = GAPCHAIN_VERSION;
#endif
  cert.x = frame.x;
  cert.y = frame.y;
  cert.B0 = frame.B0;
  cert.D = frame.D;
  cert.P = frame.P;
  cert.m = frame.m;
  for (const auto& [p, a] : frame.system.entries()) cert.classes.emplace_back(p, a);
  cert.z = BigNat(z);
  cert.k = k;
  cert.epsilon = epsilon;
  cert.prime_offsets = chain;
  cert.seed = seed;
  cert.policy = policy;
  const mpz_class base = z * frame.P.mpz() + frame.m.mpz();
  cert.min_gap = UINT64_MAX;
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) cert.min_gap = std::min(cert.min_gap, chain[j + 1] - chain[j]);
  for (auto t : chain) cert.error_budget += is_prime(BigNat(mpz_class(base + t)), policy).error_bound;
  for (std::uint64_t t = chain.front() + 1; t < chain.back(); ++t) {
    if (std::binary_search(chain.begin(), chain.end(), t)) continue;
    const BigNat mt = frame.m + BigNat(t);
    const BigNat g = gcd(mt, frame.P);
    if (!(g == BigNat(1))) {
      cert.evidence.push_back({t, EvidenceKind::gcd_with_P, g});
      continue;
    }
    const auto res = is_prime(BigNat(mpz_class(base + t)), policy);
    if (res.is_prime_like() || !res.evidence) {
      throw Error("find_gap_chain: offset " + std::to_string(t) + " between listed primes is not provably composite");
    }
    cert.evidence.push_back({t,
                             res.reason == CompositeReason::trial_factor ? EvidenceKind::trial_factor
                                                                         : EvidenceKind::mr_witness,
                             *res.evidence});
  }
  return cert;
}

}  // namespace

ChainSearch find_gap_chain(const MaierFrame& frame, const SievedSet& T, unsigned k, double epsilon,
                           std::size_t trials, Engine& rng, const MaierOptions& options) {
  if (k < 1) throw InvalidInput("find_gap_chain: k must be at least 1");
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidInput("find_gap_chain: epsilon must lie in (0, 1)");
  const mpz_class Z = row_bound(frame);
  check_budget(frame, Z, options.max_bits);
  const std::uint64_t root = rng();
  const auto members = T.members();
  const auto required = static_cast<std::uint64_t>(std::ceil(epsilon * static_cast<double>(frame.y)));

  ChainSearch out;
  out.miss.required_gap = required;
  const std::size_t batch = std::max(1u, options.threads);
  for (std::size_t first = 0; first < trials; first += batch) {
    const std::size_t n = std::min(batch, trials - first);
    std::vector<mpz_class> zs(n);
    std::vector<std::vector<char>> hits(n);
    parallel_for(n, options.threads, [&](std::size_t i) {
      Engine r = make_engine(root, "chain-row", first + i);
      zs[i] = draw_z(r, Z);
      hits[i] = row_hits(frame, members, zs[i], options.policy);
    });
    for (std::size_t i = 0; i < n; ++i) {
      ++out.trials_used;
      std::vector<std::uint64_t> primes;
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (hits[i][j]) primes.push_back(members[j]);
      }
      const auto pick = best_chain(primes, k);
      const bool better = pick.found ? (out.miss.best_prime_count < k + 1 || pick.min_gap > out.miss.best_min_gap)
                                     : (out.miss.best_prime_count < k + 1 && primes.size() > out.miss.best_prime_count);
      if (!out.miss.best_z || better) {
        out.miss.best_z = BigNat(zs[i]);
        out.miss.best_prime_count = primes.size();
        out.miss.best_min_gap = pick.found ? pick.min_gap : 0;
      }
      if (pick.found && pick.min_gap >= required && static_cast<double>(pick.min_gap) >= epsilon * frame.y) {
        std::vector<std::uint64_t> chain(primes.begin() + pick.start, primes.begin() + pick.start + k + 1);
        out.certificate = build_certificate(frame, zs[i], k, epsilon, chain, root, options.policy);
        out.miss.trials = out.trials_used;
        return out;
      }
    }
  }
  out.miss.trials = out.trials_used;
  return out;
}

Verification verify_certificate(const GapChainCertificate& cert) {
  auto reject = [](std::string why) { return Verification{false, std::move(why)}; };
  try {
    if (cert.version != 1) return reject("unsupported certificate version " + std::to_string(cert.version));
    if (cert.y <= cert.x) return reject("window (x, y] is empty");
    if (cert.D < 1) return reject("D must be at least 1");
    if (cert.B0 != 1 && !is_prime_u64(cert.B0)) return reject("B0 is neither 1 nor prime");
    if (cert.k < 1 || cert.prime_offsets.size() != cert.k + 1) {
      return reject("expected k + 1 = " + std::to_string(cert.k + 1) + " listed primes, found " +
                    std::to_string(cert.prime_offsets.size()));
    }

    // Frame.
    std::vector<std::uint64_t> expect;
    for (auto p : primes_in_range(0, cert.x)) {
      if (p != cert.B0) expect.push_back(p);
    }
    if (cert.classes.size() != expect.size()) return reject("residue classes do not cover the primes <= x");
    std::vector<Congruence> congruences;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      const auto [p, a] = cert.classes[i];
      if (p != expect[i]) return reject("residue class listed for " + std::to_string(p) + ", expected " +
                                        std::to_string(expect[i]));
      if (a >= p) return reject("class for " + std::to_string(p) + " is not reduced");
      congruences.push_back({BigNat((p - a) % p), BigNat(p)});
    }
    const BigNat P = primorial_over(cert.x, cert.B0);
    if (!(P == cert.P)) return reject("P does not equal P(x)/B0");
    const auto crt = crt_combine(congruences);
    if (!(crt.offset == cert.m)) return reject("m does not solve m = -a_p (mod p)");
    mpz_class Z;
    mpz_pow_ui(Z.get_mpz_t(), P.mpz().get_mpz_t(), cert.D);
    if (cert.z.is_zero() || cert.z.mpz() > Z) return reject("z is outside [1, P^D]");
    const mpz_class base = cert.z.mpz() * P.mpz() + cert.m.mpz();

    // Listed primes.
    for (std::size_t i = 0; i < cert.prime_offsets.size(); ++i) {
      const auto t = cert.prime_offsets[i];
      if (t <= cert.x || t > cert.y) return reject("listed offset " + std::to_string(t) + " is outside (x, y]");
      if (i > 0 && t <= cert.prime_offsets[i - 1]) return reject("listed offsets are not strictly ascending");
    }
    double budget = 0;
    for (auto t : cert.prime_offsets) {
      const mpz_class n = base + t;
      const auto res = is_prime(BigNat(n), cert.policy);
      if (!res.is_prime_like()) return reject("listed offset " + std::to_string(t) + " (" + n.get_str() + ") is composite");
      budget += res.error_bound;
    }
    if (std::abs(budget - cert.error_budget) > 1e-12 * std::max(budget, 1e-300)) {
      return reject("recorded error budget does not match the primality policy");
    }

    // Evidence.
    const auto lo = cert.prime_offsets.front();
    const auto hi = cert.prime_offsets.back();
    std::vector<char> covered(hi - lo + 1, 0);
    for (const auto& ev : cert.evidence) {
      const auto t = ev.offset;
      const std::string where = "evidence for offset " + std::to_string(t);
      if (t <= lo || t >= hi) return reject(where + " lies outside the bracketing window");
      if (std::binary_search(cert.prime_offsets.begin(), cert.prime_offsets.end(), t)) {
        return reject(where + " contradicts its listing as prime");
      }
      if (covered[t - lo]) return reject(where + " is duplicated");
      const mpz_class n = base + t;
      const mpz_class& d = ev.value.mpz();
      switch (ev.kind) {
        case EvidenceKind::gcd_with_P:
          if (d <= 1 || !mpz_divisible_p(P.mpz().get_mpz_t(), d.get_mpz_t()) ||
              !mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) || d >= n) {
            return reject(where + ": " + d.get_str() + " is not a common factor with P");
          }
          break;
        case EvidenceKind::trial_factor:
          if (d <= 1 || d >= n || !mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            return reject(where + ": " + d.get_str() + " does not divide " + n.get_str());
          }
          break;
        case EvidenceKind::mr_witness:
          if (n <= 3 || mpz_even_p(n.get_mpz_t()) || d < 2 || d > n - 2 || strong_probable_prime(n, d)) {
            return reject(where + ": base " + d.get_str() + " is not a strong-pseudoprime witness");
          }
          break;
      }
      covered[t - lo] = 1;
    }
    for (std::uint64_t t = lo + 1; t < hi; ++t) {
      if (covered[t - lo] || std::binary_search(cert.prime_offsets.begin(), cert.prime_offsets.end(), t)) continue;
      return reject("offset " + std::to_string(t) + " (" + mpz_class(base + t).get_str() +
                    ") has no compositeness evidence");
    }

    // Gaps.
    std::uint64_t g = UINT64_MAX;
    for (std::size_t i = 0; i + 1 < cert.prime_offsets.size(); ++i) {
      g = std::min(g, cert.prime_offsets[i + 1] - cert.prime_offsets[i]);
    }
    if (g != cert.min_gap) {
      return reject("recorded min_gap " + std::to_string(cert.min_gap) + " differs from recomputed " + std::to_string(g));
    }
    if (static_cast<double>(g) < cert.epsilon * static_cast<double>(cert.y)) {
      return reject("min_gap is below epsilon * y");
    }
  } catch (const Error& e) {
    return reject(std::string("malformed certificate: ") + e.what());
  }
  return {true, {}};
}

GapChainCertificate tamper_shift_prime(GapChainCertificate cert, std::size_t index, std::int64_t delta) {
  auto& t = cert.prime_offsets.at(index);
  t = static_cast<std::uint64_t>(static_cast<std::int64_t>(t) + delta);
  return cert;
}

GapChainCertificate tamper_drop_evidence(GapChainCertificate cert, std::size_t index) {
  if (index >= cert.evidence.size()) throw InvalidInput("tamper_drop_evidence: no evidence item " + std::to_string(index));
  cert.evidence.erase(cert.evidence.begin() + static_cast<std::ptrdiff_t>(index));
  return cert;
}

GapChainCertificate tamper_inflate_gap(GapChainCertificate cert, std::uint64_t by) {
  cert.min_gap += by;
  return cert;
}

std::uint64_t gk_direct(std::uint64_t X, unsigned k) {
  if (k < 1) throw InvalidInput("gk_direct: k must be at least 1");
  if (X > 100'000'000) throw DomainError("gk_direct: X must be at most 10^8");
  std::uint64_t best = 0;
  bool any = false;
  std::uint64_t prev = 0;
  std::uint64_t seen = 0;
  // Monotone deque of (index, gap) for the sliding minimum over k gaps.
  std::deque<std::pair<std::uint64_t, std::uint64_t>> window;
  for_each_prime(0, X, [&](std::uint64_t p) {
    if (seen > 0) {
      const std::uint64_t idx = seen - 1;
      const std::uint64_t gap = p - prev;
      while (!window.empty() && window.back().second >= gap) window.pop_back();
      window.emplace_back(idx, gap);
      while (window.front().first + k <= idx) window.pop_front();
      if (idx + 1 >= k) {
        best = std::max(best, window.front().second);
        any = true;
      }
    }
    prev = p;
    ++seen;
  });
  if (!any) {
    throw DomainError("gk_direct: fewer than " + std::to_string(k + 1) + " primes up to " + std::to_string(X));
  }
  return best;
}

}  // namespace gapchain
