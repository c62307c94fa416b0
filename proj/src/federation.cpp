#include "akaprime/federation.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "akaprime/error.hpp"

namespace akaprime {

namespace {

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<Method> method_for(MethodHint hint) {
  switch (hint) {
    case MethodHint::EapAka: return Method::EapAka;
    case MethodHint::EapSim: return Method::EapSim;
    case MethodHint::EapAkaPrime: return Method::EapAkaPrime;
    case MethodHint::Unknown: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> match_length(std::string_view pattern, std::string_view realm) {
  if (pattern.starts_with("*.")) {
    const std::string_view suffix = pattern.substr(1);  // keeps the leading dot
    if (realm.size() > suffix.size() && iequal(realm.substr(realm.size() - suffix.size()), suffix)) {
      return suffix.size();
    }
    return std::nullopt;
  }
  if (iequal(pattern, realm)) return realm.size();
  return std::nullopt;
}

void validate_table(const std::vector<RealmPolicy>& table) {
  if (table.empty()) throw Error(Errc::ConfigError, "policy table is empty");
  std::set<std::string> seen;
  for (const auto& p : table) {
    if (p.pattern.empty() || p.pattern == "*.") throw Error(Errc::ConfigError, "empty realm pattern");
    std::string lower = p.pattern;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!seen.insert(lower).second) throw Error(Errc::ConfigError, "duplicate realm pattern " + p.pattern);
    if (p.backend.empty()) throw Error(Errc::ConfigError, "policy " + p.pattern + " has no backend");
  }
}

const RealmPolicy& route_request(std::string_view nai, const std::vector<RealmPolicy>& table) {
  const auto at = nai.rfind('@');
  if (at == std::string_view::npos) throw Error(Errc::MissingSeparator, "identity has no '@'");
  const std::string_view realm = nai.substr(at + 1);

  const RealmPolicy* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& p : table) {
    const auto len = match_length(p.pattern, realm);
    if (len && (best == nullptr || *len > best_len)) {
      best = &p;
      best_len = *len;
    }
  }
  if (best == nullptr) throw Error(Errc::NoRoute, "unknown realm " + std::string(realm));
  return *best;
}

bool is_station_id(std::string_view s) {
  static const std::regex kMac("^[0-9A-Fa-f]{2}(-[0-9A-Fa-f]{2}){5}$");
  return std::regex_match(s.begin(), s.end(), kMac);
}

std::string_view to_string(Verdict v) { return v == Verdict::Accept ? "Access-Accept" : "Access-Reject"; }

std::string unsupported_method_reason(std::string_view method_display, std::string_view tld) {
  return "Misconfigured client: Unsupported 3G " + std::string(method_display) + " client! Rejected by " +
         std::string(tld) + ".";
}

std::string top_level_label(std::string_view pattern) {
  const auto dot = pattern.rfind('.');
  return std::string(dot == std::string_view::npos ? pattern : pattern.substr(dot + 1));
}

std::string render_log_line(Verdict v, const AccessRequest& req, std::string_view reason) {
  std::string line;
  if (!req.timestamp.empty()) line += req.timestamp + ": ";
  line += std::string(to_string(v)) + " for user " + req.nai + " stationid " + req.station_id + " from " +
          req.source + " (" + std::string(reason) + ") to " + req.client_name + " (" + req.client_ip + ")";
  return line;
}

AccessDecision authenticate_federated(const AccessRequest& req, const std::vector<RealmPolicy>& table,
                                      const BackendRunner& runner) {
  AccessDecision d;
  auto finish = [&](Verdict v, std::string reason) {
    d.verdict = v;
    d.reason = std::move(reason);
    d.log_line = render_log_line(v, req, d.reason);
    return d;
  };

  if (!is_station_id(req.station_id)) return finish(Verdict::Reject, "malformed identity");
  Nai nai;
  try {
    nai = parse_nai(req.nai);
  } catch (const Error&) {
    return finish(Verdict::Reject, "malformed identity");
  }

  const RealmPolicy* policy = nullptr;
  try {
    policy = &route_request(req.nai, table);
  } catch (const Error& e) {
    if (e.code() != Errc::NoRoute) throw;
    return finish(Verdict::Reject, "unknown realm");
  }

  const auto method = method_for(nai.method_hint);
  if (!method || !policy->supported_methods.contains(*method)) {
    return finish(Verdict::Reject, unsupported_method_reason(to_string(nai.method_hint), top_level_label(policy->pattern)));
  }

  d.backend = runner(nai, *policy);
  if (d.backend->outcome == Outcome::Success && d.backend->keys_agree) {
    return finish(Verdict::Accept, std::string(display_name(*method)) + " authentication via " + policy->backend);
  }
  return finish(Verdict::Reject, std::string(display_name(*method)) + " authentication failed: " +
                                     std::string(to_string(d.backend->outcome)));
}

BackendRunner local_5gc_runner(SubscriberStore& store, Scenario base) {
  return [&store, base = std::move(base)](const Nai& nai, const RealmPolicy&) {
    BackendReport report;
    if (!store.find(nai.imsi)) {
      report.outcome = Outcome::SubscriberNotFound;
      return report;
    }
    Scenario sc = base;
    sc.subscriber = nai.imsi;
    RunResult r = run_scenario(sc, store);
    report.outcome = r.outcome;
    report.keys_agree = r.keys_agree();
    report.trace = std::move(r.trace);
    return report;
  };
}

std::vector<RealmPolicy> policy_table_from_json(const nlohmann::json& j) {
  std::vector<RealmPolicy> table;
  try {
    for (const auto& item : j.at("policies")) {
      RealmPolicy p;
      p.pattern = item.at("realm").get<std::string>();
      for (const auto& m : item.at("supported_methods")) p.supported_methods.insert(method_from_string(m.get<std::string>()));
      p.backend = item.value("backend", std::string(kLocalBackend));
      table.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("policy table: ") + e.what());
  }
  validate_table(table);
  return table;
}

nlohmann::ordered_json to_json(const std::vector<RealmPolicy>& table) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& p : table) {
    std::vector<std::string> methods;
    for (Method m : p.supported_methods) methods.emplace_back(to_string(m));
    list.push_back({{"realm", p.pattern}, {"supported_methods", methods}, {"backend", p.backend}});
  }
  return {{"policies", list}};
}

AccessRequest access_request_from_json(const nlohmann::json& j) {
  try {
    AccessRequest r;
    r.nai = j.at("nai").get<std::string>();
    r.station_id = j.at("station_id").get<std::string>();
    r.source = j.value("source", "_self_");
    r.client_name = j.at("client_name").get<std::string>();
    r.client_ip = j.at("client_ip").get<std::string>();
    r.timestamp = j.value("timestamp", "");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("access request: ") + e.what());
  }
}

}  // namespace akaprime
