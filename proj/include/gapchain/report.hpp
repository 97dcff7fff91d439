#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapchain/config.hpp"
#include "gapchain/interval_sieve.hpp"

namespace gapchain {

struct Invariant {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Maximal runs of T as a (first, length) table.
CsvTable runs_table(const SievedSet& T);

struct Report {
  ExperimentConfig config;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<Invariant> invariants;
  std::map<std::string, double> timings_ms;
  std::map<std::string, CsvTable> tables;        ///< written as tables/<name>.csv
  std::map<std::string, std::string> artifacts;  ///< file name -> contents

  bool all_passed() const;
  void check(std::string name, bool passed, std::string detail = {});
};

/// Config echo, metrics and invariants; no timings, so it is reproducible
/// byte for byte.
std::string metrics_json(const Report& report);
/// metrics_json plus wall-clock timings.
std::string report_json(const Report& report);

/// Writes metrics.json, report.json, config.ini, tables/ and artifacts into dir.
void write_report(const Report& report, const std::string& dir);

}  // namespace gapchain
