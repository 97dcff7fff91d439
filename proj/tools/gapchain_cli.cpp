#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gapchain/config.hpp"
#include "gapchain/error.hpp"
#include "gapchain/harness.hpp"
#include "gapchain/report.hpp"

using namespace gapchain;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  bool toy = false;
  std::vector<std::string> sets;
  bool quiet = false;
};

// Subcommand flags land here as section.key -> text and are applied last.
using FlagMap = std::map<std::string, std::string>;

void bind_flag(CLI::App* sub, FlagMap& flags, const std::string& name, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
}

ExperimentConfig resolve(Mode mode, const Globals& g, const FlagMap& flags) {
  // Precedence: preset or defaults, then the file, then --set, then flags.
  ExperimentConfig c = g.toy ? toy_config(mode) : ExperimentConfig{};
  if (!g.config_path.empty()) c = load_config(g.config_path, c);
  c.mode = mode;
  for (const auto& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidInput("--set expects section.key=value, got '" + kv + "'");
    set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [key, value] : flags) set_config_value(c, key, value);
  if (g.seed) c.seed = *g.seed;
  if (g.threads) c.threads = *g.threads;
  if (g.out) c.out_dir = *g.out;
  return c;
}

int run(Mode mode, const Globals& g, const FlagMap& flags) {
  const auto config = resolve(mode, g, flags);
  const auto report = run_experiment(config);
  write_report(report, config.out_dir);
  if (!g.quiet) std::cout << report.metrics.dump(2) << "\n";
  for (const auto& inv : report.invariants) {
    std::cout << (inv.passed ? "PASS " : "FAIL ") << inv.name;
    if (!inv.detail.empty()) std::cout << " (" << inv.detail << ")";
    std::cout << "\n";
  }
  std::cout << "report written to " << config.out_dir << "\n";
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gapchain: desk-scale experiments on chains of large prime gaps"};
  app.set_version_flag("--version", std::string(GAPCHAIN_VERSION));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "root seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads");
  app.add_flag("--toy", g.toy, "start from the desk-scale preset of the subcommand");
  app.add_option("--set", g.sets, "override any config key: section.key=value");
  app.add_flag("-q,--quiet", g.quiet, "print invariants only");

  FlagMap flags;
  std::optional<Mode> chosen;
  auto add = [&](Mode mode, const std::string& help) {
    auto* sub = app.add_subcommand(to_string(mode), help);
    sub->callback([&chosen, mode] { chosen = mode; });
    return sub;
  };

  auto* primes = add(Mode::primes, "count primes and smooth numbers");
  bind_flag(primes, flags, "--limit", "primes.limit", "count primes up to this bound");
  bind_flag(primes, flags, "--smooth-y", "primes.smooth_y", "Psi(y, z): y");
  bind_flag(primes, flags, "--smooth-z", "primes.smooth_z", "Psi(y, z): z");

  auto* sieve = add(Mode::sieve, "sieve (x, y] with a residue system");
  bind_flag(sieve, flags, "--x", "params.x", "x");
  bind_flag(sieve, flags, "--y", "params.y", "override y");
  bind_flag(sieve, flags, "--classes", "sieve.classes", "greedy | random | zero");

  auto* weights = add(Mode::weights, "build sieve weights and measure contracts");
  bind_flag(weights, flags, "--kind", "weights.kind", "uniform | maynard");
  bind_flag(weights, flags, "--theta", "weights.theta", "sieve level exponent");
  bind_flag(weights, flags, "--r", "params.r", "tuple length");

  auto* construct = add(Mode::construct, "random construction with goodness report");
  bind_flag(construct, flags, "--eta", "construct.eta", "good-set tolerance");
  bind_flag(construct, flags, "--kind", "weights.kind", "uniform | maynard");

  auto* cover = add(Mode::cover, "synthetic hypergraph covering");
  bind_flag(cover, flags, "--N", "cover.N", "ground set size");
  bind_flag(cover, flags, "--P", "cover.P_count", "number of edges");
  bind_flag(cover, flags, "--m", "cover.m", "rounds");
  bind_flag(cover, flags, "--runs", "cover.runs", "seeded runs");
  bind_flag(cover, flags, "--profile", "cover.profile", "poisson | fixed-size");

  auto* maier = add(Mode::maier, "Maier matrix rows and gap-chain certificate");
  bind_flag(maier, flags, "--x", "params.x", "x");
  bind_flag(maier, flags, "--y", "params.y", "override y");
  bind_flag(maier, flags, "--D", "maier.D", "row exponent");
  bind_flag(maier, flags, "--k", "maier.k", "number of consecutive gaps");
  bind_flag(maier, flags, "--epsilon", "maier.epsilon", "gap demand as a fraction of y");
  bind_flag(maier, flags, "--trials", "maier.trials", "row budget for the chain search");

  auto* gk = add(Mode::gk, "exact G_k(X) by segmented sieve");
  bind_flag(gk, flags, "--X", "gk.X", "upper bound, at most 1e8");
  bind_flag(gk, flags, "--k", "gk.k", "number of consecutive gaps");

  auto* verify = add(Mode::verify, "verify a gap-chain certificate");
  verify->add_option_function<std::string>(
      "certificate", [&flags](const std::string& v) { flags["verify.certificate"] = v; }, "certificate JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return run(*chosen, g, flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
