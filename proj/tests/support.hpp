#pragma once

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

#include "akaprime/config.hpp"
#include "akaprime/harness.hpp"

namespace akaprime::test {

inline std::filesystem::path source_dir() { return AKAPRIME_SOURCE_DIR; }

inline nlohmann::json oracle_vectors() {
  return nlohmann::json::parse(read_file(source_dir() / "tests/golden/oracle_vectors.json"));
}

inline std::string golden_hex(const std::string& name) {
  std::string text = read_file(source_dir() / "tests/golden" / name);
  std::string hex;
  for (char c : text) {
    if (std::isxdigit(static_cast<unsigned char>(c))) hex += c;
  }
  return hex;
}

/// Runs the Python oracle on a request list and returns its JSON answer.
inline nlohmann::json run_oracle(const nlohmann::json& requests) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto in = dir / ("akaprime-oracle-" + std::to_string(std::random_device{}()) + ".json");
  write_file(in, requests.dump());
  const std::string cmd =
      std::string(AKAPRIME_PYTHON) + " \"" + (source_dir() / "tools/oracle.py").string() + "\" \"" + in.string() + "\"";
  std::string out;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int rc = pclose(pipe);
    std::filesystem::remove(in);
    if (rc != 0) throw std::runtime_error("oracle exited with " + std::to_string(rc));
  } else {
    throw std::runtime_error("cannot start oracle");
  }
  return nlohmann::json::parse(out);
}

inline Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<Byte>(rng());
  return out;
}

template <std::size_t N>
Octets<N> random_octets(std::mt19937_64& rng) {
  Octets<N> out{};
  for (auto& b : out) b = static_cast<Byte>(rng());
  return out;
}

inline std::vector<SubscriberRecord> provisioned(std::size_t n, std::string_view seed_hex = "5eed",
                                                 SuciScheme scheme = SuciScheme::Null) {
  ProvisionSpec spec;
  spec.count = n;
  spec.seed = from_hex(seed_hex);
  spec.concealment = scheme;
  return provision(spec);
}

/// Faultless EAP-AKA' scenario for the given subscriber.
inline Scenario basic_scenario(const SubscriberRecord& sub, std::string_view seed_hex = "5eed0001") {
  Scenario sc;
  sc.name = "test";
  sc.subscriber = sub.supi.imsi();
  sc.mcc = sub.supi.mcc();
  sc.mnc = sub.supi.mnc();
  sc.rng_seed = from_hex(seed_hex);
  return sc;
}

inline std::vector<std::string> event_names(const std::vector<TraceEvent>& trace) {
  std::vector<std::string> out;
  for (const auto& e : trace) out.push_back(e.event);
  return out;
}

}  // namespace akaprime::test
