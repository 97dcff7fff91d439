#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gapchain/partition.hpp"

namespace gapchain {

enum class Mode { primes, sieve, weights, construct, cover, maier, gk, verify };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

/// Every knob of every pipeline. Serialized as INI with one section per
/// module; optional fields are omitted when unset.
struct ExperimentConfig {
  Mode mode = Mode::gk;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_dir = "out";

  // [params]
  double x = 2000;
  double c = 0.1;
  double A = 4;
  std::uint64_t B0 = 1;
  double c0 = 0.25;
  std::uint64_t r0 = 1;
  ParamOverrides overrides;

  // [primes]
  std::uint64_t primes_limit = 1'000'000;
  std::uint64_t smooth_y = 100;
  std::uint64_t smooth_z = 5;

  // [sieve]
  std::string sieve_classes = "greedy";  ///< greedy | random | zero
  double short_K = 4;
  double short_epsilon = 0.05;
  bool residual_strict = false;

  // [weights]
  std::string weight_kind = "maynard";
  double theta = 0.25;
  std::size_t q_samples = 512;
  std::size_t h_samples = 64;

  // [construct]
  double eta = 0.1;
  std::size_t concentration_groups = 8;
  std::size_t concentration_pairs = 8;
  double concentration_theta = 0.05;

  // [cover]
  std::uint32_t cover_N = 100'000;
  std::uint32_t cover_P = 10'000;
  std::uint32_t cover_m = 1;
  std::string cover_profile = "poisson";
  std::uint32_t cover_r_cap = 0;
  std::uint32_t cover_runs = 9;
  double cover_subset_fraction = 0.1;

  // [maier]
  unsigned maier_D = 1;
  unsigned maier_k = 2;
  double maier_epsilon = 0.05;
  std::size_t maier_trials = 2000;
  std::size_t maier_row_trials = 200;
  std::size_t maier_max_bits = 4096;
  unsigned mr_rounds = 32;

  // [gk]
  std::uint64_t gk_X = 1'000'000;
  unsigned gk_k = 1;

  // [verify]
  std::string certificate;

  bool operator==(const ExperimentConfig&) const;
};

/// Mode-specific desk-scale settings used by --toy.
ExperimentConfig toy_config(Mode mode);

std::string config_to_ini(const ExperimentConfig& config);
/// Applies the keys present in `text` on top of `base`. Unknown keys are
/// rejected.
ExperimentConfig config_from_ini(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Sets one "section.key" field from its text form, as read from a file.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

}  // namespace gapchain
