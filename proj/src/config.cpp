#include "gapchain/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gapchain/error.hpp"

namespace gapchain {

namespace pt = boost::property_tree;

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::primes: return "primes";
    case Mode::sieve: return "sieve";
    case Mode::weights: return "weights";
    case Mode::construct: return "construct";
    case Mode::cover: return "cover";
    case Mode::maier: return "maier";
    case Mode::gk: return "gk";
    case Mode::verify: return "verify";
  }
  return "?";
}

Mode mode_from_string(const std::string& name) {
  static const std::map<std::string, Mode> table{
      {"primes", Mode::primes}, {"sieve", Mode::sieve}, {"weights", Mode::weights}, {"construct", Mode::construct},
      {"cover", Mode::cover},   {"maier", Mode::maier}, {"gk", Mode::gk},           {"verify", Mode::verify}};
  auto it = table.find(name);
  if (it == table.end()) throw InvalidInput("unknown mode '" + name + "'");
  return it->second;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InvalidInput("config: " + key + " is not a number: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InvalidInput("config: " + key + " is not a natural number: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidInput("config: " + key + " is not a boolean: '" + s + "'");
}

// One binding per key: how to write it and how to read it back.
struct Field {
  std::string key;  // section.name
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class T>
Field num(std::string key, T ExperimentConfig::*member) {
  Field f;
  f.key = key;
  f.get = [member](const ExperimentConfig& c) -> std::optional<std::string> {
    if constexpr (std::is_floating_point_v<T>) {
      return fmt_double(c.*member);
    } else if constexpr (std::is_same_v<T, bool>) {
      return std::string(c.*member ? "true" : "false");
    } else {
      return std::to_string(c.*member);
    }
  };
  f.set = [member, key](ExperimentConfig& c, const std::string& s) {
    if constexpr (std::is_floating_point_v<T>) {
      c.*member = parse_double(key, s);
    } else if constexpr (std::is_same_v<T, bool>) {
      c.*member = parse_bool(key, s);
    } else {
      const auto v = parse_u64(key, s);
      if (v > std::numeric_limits<T>::max()) throw InvalidInput("config: " + key + " is out of range");
      c.*member = static_cast<T>(v);
    }
  };
  return f;
}

Field str(std::string key, std::string ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) -> std::optional<std::string> { return c.*member; },
          [member](ExperimentConfig& c, const std::string& s) { c.*member = s; }};
}

template <class T>
Field opt(std::string key, std::optional<T> ParamOverrides::*member) {
  Field f;
  f.key = key;
  f.get = [member](const ExperimentConfig& c) -> std::optional<std::string> {
    const auto& v = c.overrides.*member;
    if (!v) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>) {
      return fmt_double(*v);
    } else {
      return std::to_string(*v);
    }
  };
  f.set = [member, key](ExperimentConfig& c, const std::string& s) {
    if constexpr (std::is_floating_point_v<T>) {
      c.overrides.*member = parse_double(key, s);
    } else {
      c.overrides.*member = parse_u64(key, s);
    }
  };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"run.mode", [](const ExperimentConfig& c) -> std::optional<std::string> { return to_string(c.mode); },
                 [](ExperimentConfig& c, const std::string& s) { c.mode = mode_from_string(s); }});
    f.push_back(num("run.seed", &ExperimentConfig::seed));
    f.push_back(num("run.threads", &ExperimentConfig::threads));
    f.push_back(str("run.out_dir", &ExperimentConfig::out_dir));
    f.push_back(num("params.x", &ExperimentConfig::x));
    f.push_back(num("params.c", &ExperimentConfig::c));
    f.push_back(num("params.A", &ExperimentConfig::A));
    f.push_back(num("params.B0", &ExperimentConfig::B0));
    f.push_back(num("params.c0", &ExperimentConfig::c0));
    f.push_back(num("params.r0", &ExperimentConfig::r0));
    f.push_back(opt("params.y", &ParamOverrides::y));
    f.push_back(opt("params.z", &ParamOverrides::z));
    f.push_back(opt("params.small_low", &ParamOverrides::small_low));
    f.push_back(opt("params.small_high", &ParamOverrides::small_high));
    f.push_back(opt("params.r", &ParamOverrides::r));
    f.push_back(opt("params.epsilon", &ParamOverrides::epsilon));
    f.push_back(opt("params.C_target", &ParamOverrides::C_target));
    f.push_back(num("primes.limit", &ExperimentConfig::primes_limit));
    f.push_back(num("primes.smooth_y", &ExperimentConfig::smooth_y));
    f.push_back(num("primes.smooth_z", &ExperimentConfig::smooth_z));
    f.push_back(str("sieve.classes", &ExperimentConfig::sieve_classes));
    f.push_back(num("sieve.short_K", &ExperimentConfig::short_K));
    f.push_back(num("sieve.short_epsilon", &ExperimentConfig::short_epsilon));
    f.push_back(num("sieve.residual_strict", &ExperimentConfig::residual_strict));
    f.push_back(str("weights.kind", &ExperimentConfig::weight_kind));
    f.push_back(num("weights.theta", &ExperimentConfig::theta));
    f.push_back(num("weights.q_samples", &ExperimentConfig::q_samples));
    f.push_back(num("weights.h_samples", &ExperimentConfig::h_samples));
    f.push_back(num("construct.eta", &ExperimentConfig::eta));
    f.push_back(num("construct.concentration_groups", &ExperimentConfig::concentration_groups));
    f.push_back(num("construct.concentration_pairs", &ExperimentConfig::concentration_pairs));
    f.push_back(num("construct.concentration_theta", &ExperimentConfig::concentration_theta));
    f.push_back(num("cover.N", &ExperimentConfig::cover_N));
    f.push_back(num("cover.P_count", &ExperimentConfig::cover_P));
    f.push_back(num("cover.m", &ExperimentConfig::cover_m));
    f.push_back(str("cover.profile", &ExperimentConfig::cover_profile));
    f.push_back(num("cover.r_cap", &ExperimentConfig::cover_r_cap));
    f.push_back(num("cover.runs", &ExperimentConfig::cover_runs));
    f.push_back(num("cover.subset_fraction", &ExperimentConfig::cover_subset_fraction));
    f.push_back(num("maier.D", &ExperimentConfig::maier_D));
    f.push_back(num("maier.k", &ExperimentConfig::maier_k));
    f.push_back(num("maier.epsilon", &ExperimentConfig::maier_epsilon));
    f.push_back(num("maier.trials", &ExperimentConfig::maier_trials));
    f.push_back(num("maier.row_trials", &ExperimentConfig::maier_row_trials));
    f.push_back(num("maier.max_bits", &ExperimentConfig::maier_max_bits));
    f.push_back(num("maier.mr_rounds", &ExperimentConfig::mr_rounds));
    f.push_back(num("gk.X", &ExperimentConfig::gk_X));
    f.push_back(num("gk.k", &ExperimentConfig::gk_k));
    f.push_back(str("verify.certificate", &ExperimentConfig::certificate));
    return f;
  }();
  return table;
}

}  // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
  for (const auto& f : fields()) {
    if (f.get(*this) != f.get(other)) return false;
  }
  return true;
}

ExperimentConfig toy_config(Mode mode) {
  ExperimentConfig c;
  c.mode = mode;
  switch (mode) {
    case Mode::primes:
      c.primes_limit = 1'000'000;
      break;
    case Mode::sieve:
    case Mode::weights:
    case Mode::construct:
      c.x = 2000;
      c.overrides.y = 22000;
      c.overrides.small_low = 50;
      c.overrides.small_high = 200;
      c.overrides.r = 4;
      c.q_samples = 256;
      break;
    case Mode::cover:
      c.cover_N = 20'000;
      c.cover_P = 2'000;
      c.cover_m = 2;
      c.cover_runs = 3;
      break;
    case Mode::maier:
      c.x = 40;
      c.overrides.y = 200;
      c.overrides.small_low = 3;
      c.overrides.small_high = 20;
      c.overrides.r = 2;
      break;
    case Mode::gk:
      c.gk_X = 1'000'000;
      c.gk_k = 1;
      break;
    case Mode::verify:
      break;
  }
  return c;
}

std::string config_to_ini(const ExperimentConfig& config) {
  // Written by hand so section and key order stay fixed.
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string sec = f.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    if (auto v = f.get(config)) out << f.key.substr(dot + 1) << " = " << *v << '\n';
  }
  return out.str();
}

ExperimentConfig config_from_ini(const std::string& text, ExperimentConfig base) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  std::map<std::string, const Field*> index;
  for (const auto& f : fields()) index[f.key] = &f;
  ExperimentConfig config = std::move(base);
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty()) throw InvalidInput("config: key '" + sec + "' outside any section");
    for (const auto& [key, value] : body) {
      const std::string full = sec + "." + key;
      auto it = index.find(full);
      if (it == index.end()) throw InvalidInput("config: unknown key '" + full + "'");
      it->second->set(config, value.get_value<std::string>());
    }
  }
  return config;
}

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(config, value);
      return;
    }
  }
  throw InvalidInput("config: unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_ini(buf.str(), std::move(base));
}

}  // namespace gapchain
