#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "akaprime/entities.hpp"
#include "akaprime/wire.hpp"

namespace akaprime {

enum class Outcome {
  Success,
  MacFailure,
  SqnFailure,
  HresMismatch,
  XresMismatch,
  MethodRejected,
  Timeout,
  SubscriberNotFound,
  IntegrityFailure,
  ProtocolError,
};

std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view name);
Outcome outcome_of(FailureReason r);

struct LinkFaults {
  double drop_prob = 0.0;  // in [0, 1]
  bool reorder = false;    // deliver same-tick envelopes of this link in random order
  int latency_ticks = 0;   // extra ticks beyond the base one-tick hop
};

enum class AdversaryAction { FlipBit, Drop, Replay };
enum class TamperTarget { Rand, Autn, Res, Hxres, Eap, Identity };

std::string_view to_string(AdversaryAction a);
AdversaryAction adversary_action_from_string(std::string_view name);
std::string_view to_string(TamperTarget t);
TamperTarget tamper_target_from_string(std::string_view name);

/// Declarative mutation: matches envelopes by interface and message name when
/// they are sent. For FlipBit the target field is located and one bit flipped;
/// with `attribute` set the offset counts from the start of that EAP attribute
/// value. Res on an EAP response falls back to AT_RES.
struct AdversaryRule {
  Interface iface = Interface::N1_UE_AMF;
  std::string message;  // empty matches any message
  AdversaryAction action = AdversaryAction::FlipBit;
  TamperTarget target = TamperTarget::Eap;
  std::optional<AttributeKind> attribute;
  std::size_t byte_offset = 0;
  int bit = 0;            // 0 = least significant
  int replay_delay = 10;  // extra ticks before the duplicate arrives
  int max_hits = 1;       // <= 0 means unlimited
};

/// Flips the addressed bit inside `env`. Returns false, leaving `env`
/// untouched, when the target field is absent or the offset is out of range.
bool apply_flip(Envelope& env, const AdversaryRule& rule);

struct NetworkCounters {
  std::size_t sent = 0;
  std::size_t delivered = 0;
  std::size_t dropped = 0;
  std::size_t pending = 0;
  std::size_t replayed = 0;  // duplicates injected by replay rules, counted in sent as well
};

/// Declared links with per-link faults and the adversary script.
class SimNetwork {
 public:
  SimNetwork();
  explicit SimNetwork(std::vector<Interface> links);

  void declare(Interface iface, LinkFaults faults = {});
  bool declared(Interface iface) const { return links_.contains(iface); }
  const LinkFaults& faults(Interface iface) const;
  const std::map<Interface, LinkFaults>& links() const { return links_; }
  const std::vector<AdversaryRule>& rules() const { return rules_; }

  friend SimNetwork inject(SimNetwork net, AdversaryRule rule);

 private:
  std::map<Interface, LinkFaults> links_;
  std::vector<AdversaryRule> rules_;
};

/// Adds a mutation to the script. Throws ConfigError when the rule targets an
/// undeclared interface.
SimNetwork inject(SimNetwork net, AdversaryRule rule);

struct Scenario {
  std::string name;
  std::filesystem::path subscribers;  // resolved path of the provisioning file
  std::string subscriber;             // IMSI to authenticate; empty picks the first record
  std::string mcc = "001";
  std::string mnc = "01";
  MethodPolicy policy;
  Bytes rng_seed;
  std::vector<AdversaryRule> adversary;
  std::map<Interface, LinkFaults> faults;
  int tick_budget = 1000;
  Outcome expected = Outcome::Success;
};

struct TraceEvent {
  std::int64_t tick = 0;
  std::string session;
  std::string kind;  // "message" or "decision"
  std::string from;
  std::string to;
  std::string interface;
  std::string event;
  std::string digest;  // hex of the EAP bytes, empty when none
  std::size_t bytes = 0;
  std::vector<std::string> flags;  // dropped, tampered, replayed, pending
  std::string detail;

  bool has_flag(std::string_view f) const;
};

nlohmann::ordered_json to_json(const TraceEvent& e);
TraceEvent trace_event_from_json(const nlohmann::json& j);
/// One compact JSON object per line, each terminated by '\n'.
std::string to_jsonl(const std::vector<TraceEvent>& trace);
std::vector<TraceEvent> parse_jsonl(std::string_view text);

/// Position of the event in the twelve-step EAP-AKA' narrative (1..12), or
/// nullopt for events outside it (AuthInfoResponse, N1 success leg, ...).
std::optional<int> narrative_step(const TraceEvent& e);

struct RunResult {
  Outcome outcome = Outcome::Timeout;
  std::vector<TraceEvent> trace;
  std::int64_t ticks = 0;
  std::size_t messages = 0;       // envelopes sent, replays included
  std::size_t payload_bytes = 0;  // sum over sent envelopes
  NetworkCounters counters;
  std::optional<Method> method;
  std::optional<AuthenticationVector> av;
  UeSession ue;
  AmfSession amf;
  AusfSession ausf;
  bool protocol_error = false;

  /// UE and network hold byte-identical K_ausf and K_seaf.
  bool keys_agree() const;
};

/// Runs one session to completion against `store`; SQN commits land in the store.
/// Throws ConfigError for an unknown subscriber, empty seed or undeclared fault link.
RunResult run_scenario(const Scenario& sc, SubscriberStore& store);

/// Loads sc.subscribers and runs. Throws ConfigError when the file is missing.
RunResult run_scenario(const Scenario& sc);

/// Same scenario with the UDM preference forced to 5G-AKA.
RunResult run_5g_aka_flow(Scenario sc, SubscriberStore& store);

}  // namespace akaprime
