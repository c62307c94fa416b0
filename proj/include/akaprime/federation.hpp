#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "akaprime/harness.hpp"
#include "akaprime/identity.hpp"
#include "akaprime/method.hpp"

namespace akaprime {

inline constexpr std::string_view kLocalBackend = "LOCAL_5GC";

/// Pattern is an exact realm or "*.suffix". Backend is LOCAL_5GC or a proxy target name.
struct RealmPolicy {
  std::string pattern;
  std::set<Method> supported_methods;
  std::string backend = std::string(kLocalBackend);

  bool local() const { return backend == kLocalBackend; }
};

/// Length of the realm text matched by `pattern`, or nullopt. Matching is case-insensitive.
std::optional<std::size_t> match_length(std::string_view pattern, std::string_view realm);

/// Throws ConfigError on an empty table, an empty pattern or a duplicate pattern.
void validate_table(const std::vector<RealmPolicy>& table);

/// Longest matching pattern wins; ties go to the earlier entry.
/// Throws Error(NoRoute) when nothing matches and MissingSeparator without '@'.
const RealmPolicy& route_request(std::string_view nai, const std::vector<RealmPolicy>& table);

struct AccessRequest {
  std::string nai;
  std::string station_id;  // aa-bb-cc-dd-ee-ff
  std::string source = "_self_";
  std::string client_name;
  std::string client_ip;
  std::string timestamp;  // optional log prefix
};

bool is_station_id(std::string_view s);

enum class Verdict { Accept, Reject };
std::string_view to_string(Verdict v);

struct BackendReport {
  Outcome outcome = Outcome::Timeout;
  bool keys_agree = false;
  std::vector<TraceEvent> trace;
};

/// One authentication run per call; each call owns its session state.
using BackendRunner = std::function<BackendReport(const Nai&, const RealmPolicy&)>;

struct AccessDecision {
  Verdict verdict = Verdict::Reject;
  std::string reason;
  std::string log_line;
  std::optional<BackendReport> backend;  // absent when the runner was not invoked
};

/// "Misconfigured client: Unsupported 3G {method} client! Rejected by {tld}."
std::string unsupported_method_reason(std::string_view method_display, std::string_view tld);

/// Last dot-separated label of a realm pattern ("*.3gppnetwork.org" -> "org").
std::string top_level_label(std::string_view pattern);

std::string render_log_line(Verdict v, const AccessRequest& req, std::string_view reason);

AccessDecision authenticate_federated(const AccessRequest& req, const std::vector<RealmPolicy>& table,
                                      const BackendRunner& runner);

/// Runs the simulated 5GC for the NAI's IMSI against `store`, with `base`
/// supplying seed, serving network and adversary settings.
BackendRunner local_5gc_runner(SubscriberStore& store, Scenario base);

std::vector<RealmPolicy> policy_table_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const std::vector<RealmPolicy>& table);
AccessRequest access_request_from_json(const nlohmann::json& j);

}  // namespace akaprime
