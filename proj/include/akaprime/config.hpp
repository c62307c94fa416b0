#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "akaprime/entities.hpp"
#include "akaprime/harness.hpp"

namespace akaprime {

// JSON documents for subscribers, scenarios and traces. Every loader throws
// Error(ConfigError) on schema violations and Error(IoError) on unreadable or
// unwritable files.

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

nlohmann::ordered_json to_json(const SubscriberRecord& r);
SubscriberRecord subscriber_from_json(const nlohmann::json& j);

nlohmann::ordered_json subscribers_to_json(const std::vector<SubscriberRecord>& records);
std::vector<SubscriberRecord> subscribers_from_json(const nlohmann::json& j);

/// Pretty-printed with a trailing newline; byte-stable for equal input.
std::string dump_subscribers(const std::vector<SubscriberRecord>& records);
std::vector<SubscriberRecord> load_subscribers(const std::filesystem::path& path);
void save_subscribers(const std::filesystem::path& path, const std::vector<SubscriberRecord>& records);

struct ProvisionSpec {
  std::size_t count = 1;
  Bytes seed;
  std::string mcc = "001";
  std::string mnc = "01";
  SuciScheme concealment = SuciScheme::Null;
};

/// Deterministic subscriber set: MSINs and root keys are HMAC-derived from the
/// seed, IMSIs are unique, one home key is shared by the PLMN.
std::vector<SubscriberRecord> provision(const ProvisionSpec& spec);

AttributeKind attribute_kind_from_string(std::string_view name);

nlohmann::ordered_json to_json(const AdversaryRule& r);
AdversaryRule adversary_rule_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const Scenario& sc, const std::filesystem::path& base_dir);
/// `base_dir` resolves a relative subscribers path. A missing rng_seed leaves
/// the seed empty so a caller-supplied fallback can fill it.
Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Writes the trace as JSON-lines.
void save_trace(const std::filesystem::path& path, const std::vector<TraceEvent>& trace);
std::vector<TraceEvent> load_trace(const std::filesystem::path& path);

}  // namespace akaprime
