#include <json.hpp>

#include "gapchain/error.hpp"
#include "gapchain/maier.hpp"

namespace gapchain {

using nlohmann::json;

std::string certificate_to_json(const GapChainCertificate& cert) {
  json doc;
  doc["format"] = "gapchain-certificate";
  doc["version"] = cert.version;
  doc["library_version"] = cert.library_version;
  json frame;
  frame["x"] = cert.x;
  frame["y"] = cert.y;
  frame["B0"] = cert.B0;
  frame["D"] = cert.D;
  frame["P"] = cert.P.to_decimal();
  frame["m"] = cert.m.to_decimal();
  json classes = json::array();
  for (const auto& [p, a] : cert.classes) classes.push_back({p, a});
  frame["classes"] = classes;
  doc["frame"] = frame;
  doc["z"] = cert.z.to_decimal();
  doc["k"] = cert.k;
  doc["epsilon"] = cert.epsilon;
  doc["prime_offsets"] = cert.prime_offsets;
  json evidence = json::array();
  for (const auto& ev : cert.evidence) {
    evidence.push_back({{"offset", ev.offset}, {"kind", to_string(ev.kind)}, {"value", ev.value.to_decimal()}});
  }
  doc["evidence"] = evidence;
  doc["min_gap"] = cert.min_gap;
  doc["seed"] = cert.seed;
  doc["policy"] = {{"mr_rounds", cert.policy.rounds}, {"deterministic_below", kDeterministicBound}};
  doc["error_budget"] = cert.error_budget;
  return doc.dump(2) + "\n";
}

GapChainCertificate certificate_from_json(const std::string& text) {
  GapChainCertificate cert;
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "gapchain-certificate") throw InvalidInput("not a gapchain certificate");
    cert.version = doc.at("version").get<int>();
    cert.library_version = doc.value("library_version", "");
    const auto& frame = doc.at("frame");
    cert.x = frame.at("x").get<std::uint64_t>();
    cert.y = frame.at("y").get<std::uint64_t>();
    cert.B0 = frame.at("B0").get<std::uint64_t>();
    cert.D = frame.at("D").get<unsigned>();
    cert.P = BigNat::from_decimal(frame.at("P").get<std::string>());
    cert.m = BigNat::from_decimal(frame.at("m").get<std::string>());
    for (const auto& c : frame.at("classes")) {
      cert.classes.emplace_back(c.at(0).get<std::uint64_t>(), c.at(1).get<std::uint64_t>());
    }
    cert.z = BigNat::from_decimal(doc.at("z").get<std::string>());
    cert.k = doc.at("k").get<unsigned>();
    cert.epsilon = doc.at("epsilon").get<double>();
    cert.prime_offsets = doc.at("prime_offsets").get<std::vector<std::uint64_t>>();
    for (const auto& ev : doc.at("evidence")) {
      cert.evidence.push_back({ev.at("offset").get<std::uint64_t>(),
                               evidence_kind_from_string(ev.at("kind").get<std::string>()),
                               BigNat::from_decimal(ev.at("value").get<std::string>())});
    }
    cert.min_gap = doc.at("min_gap").get<std::uint64_t>();
    cert.seed = doc.at("seed").get<std::uint64_t>();
    cert.policy.rounds = doc.at("policy").at("mr_rounds").get<unsigned>();
    cert.error_budget = doc.at("error_budget").get<double>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("certificate: ") + e.what());
  }
  return cert;
}

}  // namespace gapchain
