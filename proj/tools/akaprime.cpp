// akaprime: provisioning, scenario runs, method comparison, trace replay and
// federated access decisions.
//
// Exit codes: 0 expected outcome, 1 outcome mismatch, 2 configuration or I/O error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "akaprime/batch.hpp"
#include "akaprime/config.hpp"
#include "akaprime/error.hpp"
#include "akaprime/federation.hpp"
#include "akaprime/harness.hpp"

namespace fs = std::filesystem;
using namespace akaprime;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kConfig = 2;

struct CliConfig {
  std::string subscribers;
  std::string scenario;
  std::string trace_out;
  std::string seed;
  bool verbose = false;
};

/// --seed wins, then the scenario's own seed, then AKAPRIME_SEED.
void apply_seed(Scenario& sc, const CliConfig& cfg) {
  if (!cfg.seed.empty()) {
    sc.rng_seed = from_hex(cfg.seed);
  } else if (sc.rng_seed.empty()) {
    if (const char* env = std::getenv("AKAPRIME_SEED"); env != nullptr && *env != '\0') sc.rng_seed = from_hex(env);
  }
  if (sc.rng_seed.empty()) throw Error(Errc::ConfigError, "no seed: pass --seed, set rng_seed or AKAPRIME_SEED");
}

Scenario prepare(const fs::path& path, const CliConfig& cfg) {
  Scenario sc = load_scenario(path);
  if (!cfg.subscribers.empty()) sc.subscribers = cfg.subscribers;
  apply_seed(sc, cfg);
  if (sc.subscribers.empty() || !fs::exists(sc.subscribers)) {
    throw Error(Errc::ConfigError, "subscribers file '" + sc.subscribers.string() + "' not found");
  }
  return sc;
}

std::vector<fs::path> scenario_files(const fs::path& p) {
  if (!fs::exists(p)) throw Error(Errc::ConfigError, "scenario path " + p.string() + " not found");
  if (!fs::is_directory(p)) return {p};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(p)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    // scenario documents carry an expected outcome; other JSON files are skipped
    try {
      if (nlohmann::json::parse(read_file(entry.path())).contains("expected_outcome")) out.push_back(entry.path());
    } catch (const nlohmann::json::exception&) {
      throw Error(Errc::ConfigError, entry.path().string() + " is not valid JSON");
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(Errc::ConfigError, "no scenarios in " + p.string());
  return out;
}

void print_trace(std::ostream& os, const std::vector<TraceEvent>& trace) {
  for (const auto& e : trace) {
    os << "  t=" << e.tick << ' ' << e.kind << ' ' << e.from << "->" << e.to << ' ' << e.interface << ' ' << e.event;
    for (const auto& f : e.flags) os << " [" << f << ']';
    if (!e.detail.empty()) os << " (" << e.detail << ')';
    os << '\n';
  }
}

std::string summary(const Scenario& sc, const RunResult& r) {
  return "scenario=" + sc.name + " outcome=" + std::string(to_string(r.outcome)) +
         " expected=" + std::string(to_string(sc.expected)) + " ticks=" + std::to_string(r.ticks) +
         " messages=" + std::to_string(r.messages) + " bytes=" + std::to_string(r.payload_bytes) +
         " verdict=" + (r.outcome == sc.expected ? "PASS" : "FAIL");
}

// ---------------------------------------------------------------- commands

int cmd_provision(std::size_t count, const std::string& seed, const std::string& out, const std::string& mcc,
                  const std::string& mnc, const std::string& concealment) {
  ProvisionSpec spec;
  spec.count = count;
  std::string seed_hex = seed;
  if (seed_hex.empty()) {
    if (const char* env = std::getenv("AKAPRIME_SEED")) seed_hex = env;
  }
  spec.seed = from_hex(seed_hex);
  spec.mcc = mcc;
  spec.mnc = mnc;
  spec.concealment = suci_scheme_from_string(concealment);
  const auto records = provision(spec);
  save_subscribers(out, records);
  std::cout << "provisioned " << records.size() << " subscribers into " << out << '\n';
  return kOk;
}

int cmd_run(const CliConfig& cfg) {
  const auto files = scenario_files(cfg.scenario);
  std::vector<Scenario> scenarios;
  for (const auto& f : files) scenarios.push_back(prepare(f, cfg));

  const bool many = scenarios.size() > 1;
  if (many && !cfg.trace_out.empty()) fs::create_directories(cfg.trace_out);
  const auto results = many ? run_batch(scenarios) : run_batch_serial(scenarios, SubscriberStore(load_subscribers(scenarios[0].subscribers)));

  int rc = kOk;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& sc = scenarios[i];
    const auto& br = results[i];
    if (!br.error.empty()) {
      std::cerr << "scenario " << sc.name << ": " << br.error << '\n';
      rc = kConfig;
      continue;
    }
    if (!cfg.trace_out.empty()) {
      const fs::path out = many ? fs::path(cfg.trace_out) / (sc.name + ".jsonl") : fs::path(cfg.trace_out);
      save_trace(out, br.result.trace);
    }
    if (cfg.verbose) print_trace(std::cerr, br.result.trace);
    std::cout << summary(sc, br.result) << '\n';
    if (br.result.outcome != sc.expected && rc == kOk) rc = kMismatch;
  }
  return rc;
}

int cmd_compare(const CliConfig& cfg) {
  Scenario sc = prepare(cfg.scenario, cfg);
  const SubscriberStore base(load_subscribers(sc.subscribers));
  const auto records = base.records();
  auto it = std::find_if(records.begin(), records.end(),
                         [&](const SubscriberRecord& r) { return sc.subscriber.empty() || r.supi.imsi() == sc.subscriber; });
  if (it == records.end()) throw Error(Errc::ConfigError, "subscriber " + sc.subscriber + " is not provisioned");
  for (Method m : {Method::EapAkaPrime, Method::FiveGAka}) {
    if (!it->allowed_methods.contains(m)) {
      throw Error(Errc::ConfigError, "subscriber " + it->supi.imsi() + " does not allow " + std::string(to_string(m)));
    }
  }

  std::cout << "method,outcome,messages,payload_bytes,rand,autn,xres,k_ausf,k_seaf\n";
  bool all_ok = true;
  for (Method m : {Method::EapAkaPrime, Method::FiveGAka}) {
    Scenario run = sc;
    run.subscriber = it->supi.imsi();
    run.policy.preference = {m};
    SubscriberStore store(base);
    const RunResult r = run_scenario(run, store);
    auto fp = [](const auto& v) { return fingerprint(v); };
    std::cout << to_string(m) << ',' << to_string(r.outcome) << ',' << r.messages << ',' << r.payload_bytes << ','
              << (r.av ? fp(r.av->rand) : "-") << ',' << (r.av ? fp(r.av->autn.encode()) : "-") << ','
              << (r.av ? fp(r.av->xres) : "-") << ',' << (r.ausf.k_ausf ? fp(*r.ausf.k_ausf) : "-") << ','
              << (r.ausf.k_seaf ? fp(*r.ausf.k_seaf) : "-") << '\n';
    all_ok = all_ok && r.outcome == Outcome::Success && r.keys_agree();
  }
  return all_ok ? kOk : kMismatch;
}

int cmd_replay(const CliConfig& cfg, const std::string& trace_path) {
  const auto stored = load_trace(trace_path);
  std::cout << to_jsonl(stored);
  const Scenario sc = prepare(cfg.scenario, cfg);
  const RunResult r = run_scenario(sc);
  if (cfg.verbose) print_trace(std::cerr, r.trace);

  const bool same = to_jsonl(r.trace) == to_jsonl(stored);
  std::cout << summary(sc, r) << " trace=" << (same ? "IDENTICAL" : "DIVERGED") << '\n';
  return same && r.outcome == sc.expected ? kOk : kMismatch;
}

int cmd_federate(const CliConfig& cfg, const std::string& policy_path, const std::string& request_path,
                 const std::string& expect) {
  const auto table = policy_table_from_json(nlohmann::json::parse(read_file(policy_path)));
  const auto req = access_request_from_json(nlohmann::json::parse(read_file(request_path)));

  Scenario base;
  if (!cfg.scenario.empty()) {
    base = prepare(cfg.scenario, cfg);
  } else {
    base.subscribers = cfg.subscribers;
    apply_seed(base, cfg);
  }
  if (!cfg.subscribers.empty()) base.subscribers = cfg.subscribers;
  SubscriberStore store(base.subscribers.empty() ? std::vector<SubscriberRecord>{} : load_subscribers(base.subscribers));

  const AccessDecision d = authenticate_federated(req, table, local_5gc_runner(store, base));
  if (cfg.verbose && d.backend) print_trace(std::cerr, d.backend->trace);
  std::cout << d.log_line << '\n';
  if (expect.empty()) return kOk;
  const std::string got(to_string(d.verdict));
  return got == expect || got == "Access-" + expect ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EAP-AKA' 5G authentication simulator"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto* provision_cmd = app.add_subcommand("provision", "write a deterministic subscribers file");
  std::size_t count = 1;
  std::string mcc = "001", mnc = "01", concealment = "null", out;
  provision_cmd->add_option("-n,--count", count, "number of subscribers")->required()->check(CLI::PositiveNumber);
  provision_cmd->add_option("--seed", cfg.seed, "hex seed (falls back to AKAPRIME_SEED)");
  provision_cmd->add_option("--out,--subscribers", out, "output file")->required();
  provision_cmd->add_option("--mcc", mcc);
  provision_cmd->add_option("--mnc", mnc);
  provision_cmd->add_option("--concealment", concealment, "null or symtest");

  auto add_common = [&](CLI::App* cmd, bool scenario_required) {
    auto* opt = cmd->add_option("--scenario", cfg.scenario, "scenario file (or directory for run)");
    if (scenario_required) opt->required();
    cmd->add_option("--subscribers", cfg.subscribers, "override the scenario's subscribers file");
    cmd->add_option("--seed", cfg.seed, "hex seed overriding the scenario");
    cmd->add_flag("-v,--verbose", cfg.verbose, "print the trace to stderr");
  };

  auto* run_cmd = app.add_subcommand("run", "run scenarios and check expected outcomes");
  add_common(run_cmd, true);
  run_cmd->add_option("--trace-out", cfg.trace_out, "JSON-lines trace file (directory when running many)");

  auto* compare_cmd = app.add_subcommand("compare", "run EAP-AKA' and 5G-AKA on the same seed");
  add_common(compare_cmd, true);

  auto* replay_cmd = app.add_subcommand("replay", "re-emit a stored trace and re-check it against a fresh run");
  add_common(replay_cmd, true);
  std::string trace_path;
  replay_cmd->add_option("--trace", trace_path, "stored JSON-lines trace")->required();

  auto* federate_cmd = app.add_subcommand("federate", "decide a federated access request");
  add_common(federate_cmd, false);
  std::string policy_path, request_path, expect;
  federate_cmd->add_option("--policy", policy_path, "realm policy table")->required();
  federate_cmd->add_option("--request", request_path, "access request")->required();
  federate_cmd->add_option("--expect", expect, "ACCEPT or REJECT")->check(CLI::IsMember({"ACCEPT", "REJECT", "Accept", "Reject"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*provision_cmd) return cmd_provision(count, cfg.seed, out, mcc, mnc, concealment);
    if (*run_cmd) return cmd_run(cfg);
    if (*compare_cmd) return cmd_compare(cfg);
    if (*replay_cmd) return cmd_replay(cfg, trace_path);
    if (*federate_cmd) {
      std::string e = expect;
      std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::toupper(c); });
      if (e == "ACCEPT") e = "Access-Accept";
      if (e == "REJECT") e = "Access-Reject";
      return cmd_federate(cfg, policy_path, request_path, e);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
