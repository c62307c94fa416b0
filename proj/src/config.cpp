#include "akaprime/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "akaprime/digest.hpp"
#include "akaprime/error.hpp"

namespace akaprime {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class F>
auto schema(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) throw;
    throw Error(Errc::ConfigError, std::string(what) + ": " + e.what());
  }
}

json parse_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, path.string() + ": " + e.what());
  }
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

// ---------------------------------------------------------------- subscribers

ordered_json to_json(const SubscriberRecord& r) {
  ordered_json j;
  j["supi"] = {{"mcc", r.supi.mcc()}, {"mnc", r.supi.mnc()}, {"msin", r.supi.msin()}};
  j["k"] = to_hex(r.cred.k);
  j["sqn"] = r.cred.sqn;
  j["amf"] = to_hex(r.cred.amf_field);
  std::vector<std::string> methods;
  for (Method m : r.allowed_methods) methods.emplace_back(to_string(m));
  j["allowed_methods"] = methods;
  j["realm"] = r.realm;
  j["concealment"] = {{"scheme", to_string(r.concealment)}, {"home_key", to_hex(r.home_key)}};
  j["ue_sqn"] = r.ue_sqn;
  return j;
}

SubscriberRecord subscriber_from_json(const json& j) {
  return schema("subscriber", [&] {
    const auto& s = j.at("supi");
    SubscriberRecord r{
        Supi::make(s.at("mcc").get<std::string>(), s.at("mnc").get<std::string>(), s.at("msin").get<std::string>()),
        {},
        {},
        {},
    };
    r.cred.k = octets_from_hex<16>(j.at("k").get<std::string>());
    r.cred.sqn = j.at("sqn").get<Sqn>();
    r.cred.amf_field = octets_from_hex<2>(j.value("amf", std::string("8000")));
    for (const auto& m : j.at("allowed_methods")) r.allowed_methods.insert(method_from_string(m.get<std::string>()));
    r.realm = j.value("realm", wlan_realm(r.supi.mcc(), r.supi.mnc()));
    if (j.contains("concealment")) {
      const auto& c = j.at("concealment");
      r.concealment = suci_scheme_from_string(c.at("scheme").get<std::string>());
      r.home_key = octets_from_hex<32>(c.value("home_key", std::string(64, '0')));
    }
    r.ue_sqn = j.value("ue_sqn", Sqn{0});
    r.validate();
    return r;
  });
}

ordered_json subscribers_to_json(const std::vector<SubscriberRecord>& records) {
  ordered_json list = ordered_json::array();
  for (const auto& r : records) list.push_back(to_json(r));
  ordered_json j;
  j["subscribers"] = std::move(list);
  return j;
}

std::vector<SubscriberRecord> subscribers_from_json(const json& j) {
  return schema("subscribers file", [&] {
    std::vector<SubscriberRecord> out;
    std::set<std::string> seen;
    for (const auto& item : j.at("subscribers")) {
      out.push_back(subscriber_from_json(item));
      if (!seen.insert(out.back().supi.imsi()).second) {
        throw Error(Errc::ConfigError, "duplicate IMSI " + out.back().supi.imsi());
      }
    }
    return out;
  });
}

std::string dump_subscribers(const std::vector<SubscriberRecord>& records) {
  return subscribers_to_json(records).dump(2) + "\n";
}

std::vector<SubscriberRecord> load_subscribers(const fs::path& path) {
  if (!fs::exists(path)) throw Error(Errc::ConfigError, "subscribers file " + path.string() + " not found");
  return subscribers_from_json(parse_json(path));
}

void save_subscribers(const fs::path& path, const std::vector<SubscriberRecord>& records) {
  write_file(path, dump_subscribers(records));
}

std::vector<SubscriberRecord> provision(const ProvisionSpec& spec) {
  if (spec.count < 1) throw Error(Errc::ConfigError, "provision count must be at least 1");
  if (spec.seed.empty()) throw Error(Errc::ConfigError, "provision seed is empty");

  const std::size_t msin_len = 15 - spec.mcc.size() - spec.mnc.size();
  // validate the PLMN digits once through Supi::make
  Supi::make(spec.mcc, spec.mnc, std::string(msin_len, '0'));
  std::uint64_t modulus = 1;
  for (std::size_t i = 0; i < msin_len; ++i) modulus *= 10;

  const HomeKey home_key =
      take<32>(hmac_sha256(spec.seed, concat({as_bytes("home-key"), as_bytes(spec.mcc), as_bytes(spec.mnc)})));

  std::vector<SubscriberRecord> out;
  std::set<std::string> used;
  std::uint32_t draw = 0;
  for (std::size_t i = 0; i < spec.count; ++i) {
    std::string msin;
    do {
      const auto d = hmac_sha256(spec.seed, concat({as_bytes("msin"), be_encode(draw++, 4)}));
      std::string digits = std::to_string(be_decode(ByteView(d).first(8)) % modulus);
      msin = std::string(msin_len - digits.size(), '0') + digits;
    } while (!used.insert(msin).second);

    SubscriberRecord r{Supi::make(spec.mcc, spec.mnc, msin), {}, {}, {}};
    r.cred.k = take<16>(hmac_sha256(spec.seed, concat({as_bytes("k"), be_encode(i, 4)})));
    r.cred.sqn = 1;
    r.cred.amf_field = {0x80, 0x00};
    r.allowed_methods = {Method::FiveGAka, Method::EapAkaPrime};
    r.realm = wlan_realm(spec.mcc, spec.mnc);
    r.concealment = spec.concealment;
    r.home_key = home_key;
    r.ue_sqn = 0;
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- scenarios

AttributeKind attribute_kind_from_string(std::string_view name) {
  for (auto k : {AttributeKind::Rand, AttributeKind::Autn, AttributeKind::Res, AttributeKind::Mac,
                 AttributeKind::Identity, AttributeKind::KdfInput, AttributeKind::Kdf}) {
    if (to_string(k) == name) return k;
  }
  throw Error(Errc::ConfigError, "unknown attribute '" + std::string(name) + "'");
}

ordered_json to_json(const AdversaryRule& r) {
  ordered_json j;
  j["interface"] = to_string(r.iface);
  j["message"] = r.message;
  j["action"] = to_string(r.action);
  j["target"] = to_string(r.target);
  if (r.attribute) j["attribute"] = to_string(*r.attribute);
  j["byte_offset"] = r.byte_offset;
  j["bit"] = r.bit;
  j["replay_delay"] = r.replay_delay;
  j["max_hits"] = r.max_hits;
  return j;
}

AdversaryRule adversary_rule_from_json(const json& j) {
  return schema("adversary rule", [&] {
    AdversaryRule r;
    r.iface = interface_from_string(j.at("interface").get<std::string>());
    r.message = j.value("message", "");
    r.action = adversary_action_from_string(j.value("action", "FLIP_BIT"));
    r.target = tamper_target_from_string(j.value("target", "EAP"));
    if (j.contains("attribute")) r.attribute = attribute_kind_from_string(j.at("attribute").get<std::string>());
    r.byte_offset = j.value("byte_offset", std::size_t{0});
    r.bit = j.value("bit", 0);
    r.replay_delay = j.value("replay_delay", 10);
    r.max_hits = j.value("max_hits", 1);
    return r;
  });
}

ordered_json to_json(const Scenario& sc, const fs::path& base_dir) {
  ordered_json j;
  j["name"] = sc.name;
  j["subscribers"] = sc.subscribers.empty() ? std::string() : fs::relative(sc.subscribers, base_dir).generic_string();
  if (!sc.subscriber.empty()) j["subscriber"] = sc.subscriber;
  j["serving_network"] = {{"mcc", sc.mcc}, {"mnc", sc.mnc}, {"network_type", to_string(sc.policy.network_type)}};
  std::vector<std::string> pref;
  for (Method m : sc.policy.preference) pref.emplace_back(to_string(m));
  j["policy"] = {{"preference", pref}};
  j["rng_seed"] = to_hex(sc.rng_seed);
  ordered_json adv = ordered_json::array();
  for (const auto& r : sc.adversary) adv.push_back(to_json(r));
  j["adversary"] = std::move(adv);
  ordered_json faults = ordered_json::object();
  for (const auto& [iface, f] : sc.faults) {
    faults[std::string(to_string(iface))] = {
        {"drop_prob", f.drop_prob}, {"reorder", f.reorder}, {"latency_ticks", f.latency_ticks}};
  }
  j["faults"] = std::move(faults);
  j["tick_budget"] = sc.tick_budget;
  j["expected_outcome"] = to_string(sc.expected);
  return j;
}

Scenario scenario_from_json(const json& j, const fs::path& base_dir) {
  return schema("scenario", [&] {
    Scenario sc;
    sc.name = j.value("name", "");
    const std::string subs = j.at("subscribers").get<std::string>();
    if (!subs.empty()) {
      fs::path p(subs);
      sc.subscribers = p.is_absolute() ? p : base_dir / p;
    }
    sc.subscriber = j.value("subscriber", "");
    if (j.contains("serving_network")) {
      const auto& sn = j.at("serving_network");
      sc.mcc = sn.value("mcc", sc.mcc);
      sc.mnc = sn.value("mnc", sc.mnc);
      sc.policy.network_type = network_type_from_string(sn.value("network_type", "PUBLIC"));
    }
    if (j.contains("policy") && j.at("policy").contains("preference")) {
      sc.policy.preference.clear();
      for (const auto& m : j.at("policy").at("preference")) {
        sc.policy.preference.push_back(method_from_string(m.get<std::string>()));
      }
    }
    if (j.contains("rng_seed")) sc.rng_seed = from_hex(j.at("rng_seed").get<std::string>());
    const json adversary = j.value("adversary", json::array());
    for (const auto& r : adversary) sc.adversary.push_back(adversary_rule_from_json(r));
    const json faults = j.value("faults", json::object());
    for (const auto& [name, f] : faults.items()) {
      LinkFaults lf;
      lf.drop_prob = f.value("drop_prob", 0.0);
      lf.reorder = f.value("reorder", false);
      lf.latency_ticks = f.value("latency_ticks", 0);
      if (lf.drop_prob < 0.0 || lf.drop_prob > 1.0) throw Error(Errc::ConfigError, "drop_prob outside [0, 1]");
      if (lf.latency_ticks < 0) throw Error(Errc::ConfigError, "negative latency");
      sc.faults[interface_from_string(name)] = lf;
    }
    sc.tick_budget = j.value("tick_budget", 1000);
    sc.expected = outcome_from_string(j.value("expected_outcome", "SUCCESS"));
    return sc;
  });
}

Scenario load_scenario(const fs::path& path) {
  if (!fs::exists(path)) throw Error(Errc::ConfigError, "scenario " + path.string() + " not found");
  Scenario sc = scenario_from_json(parse_json(path), path.parent_path());
  if (sc.name.empty()) sc.name = path.stem().string();
  return sc;
}

RunResult run_scenario(const Scenario& sc) {
  if (sc.subscribers.empty()) throw Error(Errc::ConfigError, "scenario '" + sc.name + "' names no subscribers file");
  SubscriberStore store(load_subscribers(sc.subscribers));
  return run_scenario(sc, store);
}

void save_trace(const fs::path& path, const std::vector<TraceEvent>& trace) { write_file(path, to_jsonl(trace)); }

std::vector<TraceEvent> load_trace(const fs::path& path) { return parse_jsonl(read_file(path)); }

}  // namespace akaprime
