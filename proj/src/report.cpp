#include "gapchain/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gapchain/error.hpp"

namespace gapchain {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json base_document(const Report& report) {
  json doc;
  doc["config"] = config_to_ini(report.config);
  doc["metrics"] = report.metrics;
  json inv = json::array();
  for (const auto& i : report.invariants) inv.push_back({{"name", i.name}, {"passed", i.passed}, {"detail", i.detail}});
  doc["invariants"] = inv;
  doc["all_passed"] = report.all_passed();
  return doc;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
}

}  // namespace

std::string CsvTable::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
  return out.str();
}

CsvTable runs_table(const SievedSet& T) {
  CsvTable t;
  t.header = {"first", "length"};
  for (const auto& [first, len] : T.runs()) t.rows.push_back({std::to_string(first), std::to_string(len)});
  return t;
}

bool Report::all_passed() const {
  for (const auto& i : invariants) {
    if (!i.passed) return false;
  }
  return true;
}

void Report::check(std::string name, bool passed, std::string detail) {
  invariants.push_back({std::move(name), passed, std::move(detail)});
}

std::string metrics_json(const Report& report) { return base_document(report).dump(2) + "\n"; }

std::string report_json(const Report& report) {
  json doc = base_document(report);
  doc["timings_ms"] = report.timings_ms;
  return doc.dump(2) + "\n";
}

void write_report(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  write_file(root / "metrics.json", metrics_json(report));
  write_file(root / "report.json", report_json(report));
  write_file(root / "config.ini", config_to_ini(report.config));
  if (!report.tables.empty()) {
    fs::create_directories(root / "tables");
    for (const auto& [name, table] : report.tables) write_file(root / "tables" / (name + ".csv"), table.to_csv());
  }
  for (const auto& [name, contents] : report.artifacts) write_file(root / name, contents);
}

}  // namespace gapchain
