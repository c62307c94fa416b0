#include "akaprime/harness.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "akaprime/digest.hpp"
#include "akaprime/error.hpp"

namespace akaprime {

// ---------------------------------------------------------------- enums

namespace {

constexpr std::array<std::pair<Outcome, std::string_view>, 10> kOutcomes{{
    {Outcome::Success, "SUCCESS"},
    {Outcome::MacFailure, "MAC_FAILURE"},
    {Outcome::SqnFailure, "SQN_FAILURE"},
    {Outcome::HresMismatch, "HRES_MISMATCH"},
    {Outcome::XresMismatch, "XRES_MISMATCH"},
    {Outcome::MethodRejected, "METHOD_REJECTED"},
    {Outcome::Timeout, "TIMEOUT"},
    {Outcome::SubscriberNotFound, "SUBSCRIBER_NOT_FOUND"},
    {Outcome::IntegrityFailure, "INTEGRITY_FAILURE"},
    {Outcome::ProtocolError, "PROTOCOL_ERROR"},
}};

constexpr std::array<std::pair<TamperTarget, std::string_view>, 6> kTargets{{
    {TamperTarget::Rand, "RAND"},
    {TamperTarget::Autn, "AUTN"},
    {TamperTarget::Res, "RES"},
    {TamperTarget::Hxres, "HXRES"},
    {TamperTarget::Eap, "EAP"},
    {TamperTarget::Identity, "IDENTITY"},
}};

template <class E, std::size_t N>
E lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view name,
         std::string_view what) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  throw Error(Errc::ConfigError, "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

template <class E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "?";
}

}  // namespace

std::string_view to_string(Outcome o) { return name_of(kOutcomes, o); }
Outcome outcome_from_string(std::string_view name) { return lookup(kOutcomes, name, "outcome"); }

Outcome outcome_of(FailureReason r) {
  switch (r) {
    case FailureReason::MacFailure: return Outcome::MacFailure;
    case FailureReason::SqnFailure: return Outcome::SqnFailure;
    case FailureReason::HresMismatch: return Outcome::HresMismatch;
    case FailureReason::XresMismatch: return Outcome::XresMismatch;
    case FailureReason::MethodRejected: return Outcome::MethodRejected;
    case FailureReason::SubscriberNotFound: return Outcome::SubscriberNotFound;
    case FailureReason::IntegrityFailure: return Outcome::IntegrityFailure;
    case FailureReason::ProtocolError: return Outcome::ProtocolError;
  }
  return Outcome::ProtocolError;
}

std::string_view to_string(AdversaryAction a) {
  switch (a) {
    case AdversaryAction::FlipBit: return "FLIP_BIT";
    case AdversaryAction::Drop: return "DROP";
    case AdversaryAction::Replay: return "REPLAY";
  }
  return "?";
}

AdversaryAction adversary_action_from_string(std::string_view name) {
  if (name == "FLIP_BIT") return AdversaryAction::FlipBit;
  if (name == "DROP") return AdversaryAction::Drop;
  if (name == "REPLAY") return AdversaryAction::Replay;
  throw Error(Errc::ConfigError, "unknown adversary action '" + std::string(name) + "'");
}

std::string_view to_string(TamperTarget t) { return name_of(kTargets, t); }
TamperTarget tamper_target_from_string(std::string_view name) { return lookup(kTargets, name, "tamper target"); }

// ---------------------------------------------------------------- tampering

namespace {

bool flip_in(std::span<Byte> field, const AdversaryRule& rule) {
  if (rule.byte_offset >= field.size() || rule.bit < 0 || rule.bit > 7) return false;
  field[rule.byte_offset] ^= static_cast<Byte>(1u << rule.bit);
  return true;
}

bool flip_autn(Autn& autn, const AdversaryRule& rule) {
  auto raw = autn.encode();
  if (!flip_in(raw, rule)) return false;
  autn = Autn::decode(raw);
  return true;
}

bool flip_string(std::string& s, const AdversaryRule& rule) {
  if (rule.byte_offset >= s.size() || rule.bit < 0 || rule.bit > 7) return false;
  s[rule.byte_offset] = static_cast<char>(static_cast<Byte>(s[rule.byte_offset]) ^ (1u << rule.bit));
  return true;
}

/// Flips inside an encoded EAP packet; with an attribute kind the offset is
/// relative to that attribute's value and the packet is re-encoded.
bool flip_eap(std::optional<Bytes>& eap, const AdversaryRule& rule, std::optional<AttributeKind> attribute) {
  if (!eap) return false;
  if (!attribute) return flip_in(*eap, rule);
  EapPacket p;
  try {
    p = decode_eap(*eap);
  } catch (const Error&) {
    return false;
  }
  for (auto& a : p.attributes) {
    if (a.kind == *attribute) {
      if (!flip_in(a.value, rule)) return false;
      *eap = encode_eap(p);
      return true;
    }
  }
  return false;
}

}  // namespace

bool apply_flip(Envelope& env, const AdversaryRule& rule) {
  Payload& payload = env.mutable_payload();
  switch (rule.target) {
    case TamperTarget::Rand:
      if (auto* c = std::get_if<ChallengeForward>(&payload)) return flip_in(c->rand, rule);
      if (auto* r = std::get_if<AuthInfoResponse>(&payload)) return flip_in(r->av.rand, rule);
      return false;
    case TamperTarget::Autn:
      if (auto* c = std::get_if<ChallengeForward>(&payload)) return flip_autn(c->autn, rule);
      if (auto* r = std::get_if<AuthInfoResponse>(&payload)) return flip_autn(r->av.autn, rule);
      return false;
    case TamperTarget::Res:
      if (auto* c = std::get_if<ChallengeResponse>(&payload)) {
        if (c->res) return flip_in(*c->res, rule);
        return flip_eap(c->eap, rule, AttributeKind::Res);
      }
      if (auto* v = std::get_if<ResVerifyRequest>(&payload)) return flip_in(v->res, rule);
      return false;
    case TamperTarget::Hxres:
      if (auto* c = std::get_if<ChallengeForward>(&payload); c && c->hxres) return flip_in(*c->hxres, rule);
      return false;
    case TamperTarget::Eap:
      return std::visit(
          [&](auto& p) {
            if constexpr (requires { p.eap; }) {
              return flip_eap(p.eap, rule, rule.attribute);
            } else {
              return false;
            }
          },
          payload);
    case TamperTarget::Identity:
      if (auto* p = std::get_if<IdentityResponse>(&payload)) return flip_string(p->identity, rule);
      if (auto* p = std::get_if<AuthRequest>(&payload)) return flip_string(p->identity, rule);
      if (auto* p = std::get_if<AuthInfoRequest>(&payload)) return flip_string(p->identity, rule);
      if (auto* p = std::get_if<ResVerifyRequest>(&payload)) return flip_string(p->supi, rule);
      return false;
  }
  return false;
}

// ---------------------------------------------------------------- network

SimNetwork::SimNetwork()
    : SimNetwork({Interface::N1_UE_AMF, Interface::N12_AMF_AUSF, Interface::N13_AUSF_UDM}) {}

SimNetwork::SimNetwork(std::vector<Interface> links) {
  for (auto i : links) links_.emplace(i, LinkFaults{});
}

void SimNetwork::declare(Interface iface, LinkFaults f) {
  if (f.drop_prob < 0.0 || f.drop_prob > 1.0) throw Error(Errc::ConfigError, "drop_prob outside [0, 1]");
  if (f.latency_ticks < 0) throw Error(Errc::ConfigError, "negative latency");
  links_.insert_or_assign(iface, f);
}

const LinkFaults& SimNetwork::faults(Interface iface) const {
  auto it = links_.find(iface);
  if (it == links_.end()) throw Error(Errc::ConfigError, "interface " + std::string(to_string(iface)) + " not declared");
  return it->second;
}

SimNetwork inject(SimNetwork net, AdversaryRule rule) {
  if (!net.declared(rule.iface)) {
    throw Error(Errc::ConfigError, "adversary targets undeclared interface " + std::string(to_string(rule.iface)));
  }
  if (rule.bit < 0 || rule.bit > 7) throw Error(Errc::ConfigError, "bit index outside 0..7");
  if (rule.replay_delay < 0) throw Error(Errc::ConfigError, "negative replay delay");
  net.rules_.push_back(std::move(rule));
  return net;
}

// ---------------------------------------------------------------- trace

bool TraceEvent::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

nlohmann::ordered_json to_json(const TraceEvent& e) {
  nlohmann::ordered_json j;
  j["tick"] = e.tick;
  j["session"] = e.session;
  j["kind"] = e.kind;
  j["from"] = e.from;
  j["to"] = e.to;
  j["interface"] = e.interface;
  j["event"] = e.event;
  j["digest"] = e.digest;
  j["bytes"] = e.bytes;
  j["flags"] = e.flags;
  j["detail"] = e.detail;
  return j;
}

TraceEvent trace_event_from_json(const nlohmann::json& j) {
  try {
    TraceEvent e;
    e.tick = j.at("tick").get<std::int64_t>();
    e.session = j.at("session").get<std::string>();
    e.kind = j.at("kind").get<std::string>();
    e.from = j.at("from").get<std::string>();
    e.to = j.at("to").get<std::string>();
    e.interface = j.at("interface").get<std::string>();
    e.event = j.at("event").get<std::string>();
    e.digest = j.at("digest").get<std::string>();
    e.bytes = j.at("bytes").get<std::size_t>();
    e.flags = j.at("flags").get<std::vector<std::string>>();
    e.detail = j.value("detail", "");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::ConfigError, std::string("bad trace event: ") + ex.what());
  }
}

std::string to_jsonl(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const auto& e : trace) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<TraceEvent> parse_jsonl(std::string_view text) {
  std::vector<TraceEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw Error(Errc::ConfigError, std::string("bad trace line: ") + ex.what());
    }
    out.push_back(trace_event_from_json(j));
  }
  return out;
}

std::optional<int> narrative_step(const TraceEvent& e) {
  struct Step {
    std::string_view kind, event, from, to;
    int n;
  };
  static constexpr std::array<Step, 12> kSteps{{
      {"message", "IdentityRequest", "AMF", "UE", 1},
      {"message", "IdentityResponse", "UE", "AMF", 2},
      {"message", "AuthRequest", "AMF", "AUSF", 3},
      {"message", "AuthInfoRequest", "AUSF", "UDM", 4},
      {"decision", "MethodSelected", "UDM", "UDM", 5},
      {"decision", "AvGenerated", "UDM", "UDM", 6},
      {"decision", "XresStored", "AUSF", "AUSF", 7},
      {"message", "ChallengeForward", "AMF", "UE", 8},
      {"message", "ChallengeResponse", "UE", "AMF", 9},
      {"decision", "HresVerified", "AMF", "AMF", 10},
      {"decision", "ResVerified", "AUSF", "AUSF", 11},
      {"message", "SuccessNotice", "AUSF", "AMF", 12},
  }};
  for (const auto& s : kSteps) {
    if (e.kind == s.kind && e.event == s.event && e.from == s.from && e.to == s.to) return s.n;
  }
  return std::nullopt;
}

bool RunResult::keys_agree() const {
  if (!ue.keys || !amf.k_seaf || !ausf.k_seaf || !ausf.k_ausf) return false;
  return ue.keys->k_ausf == *ausf.k_ausf && ue.keys->k_seaf == *ausf.k_seaf && *amf.k_seaf == *ausf.k_seaf;
}

// ---------------------------------------------------------------- event loop

namespace {

struct InFlight {
  std::int64_t due = 0;
  std::uint64_t seq = 0;
  Envelope env;
  std::size_t trace_index = 0;
  bool replayed = false;
};

class Loop {
 public:
  Loop(const Scenario& sc, SubscriberStore& store, SubscriberRecord sub, SimNetwork net)
      : sc_(sc),
        net_(std::move(net)),
        session_(make_session(sc, sub)),
        sn_(derive_snn(sc.mcc, sc.mnc)),
        ue_(sub, sn_, session_, take<16>(hmac_sha256(sc.rng_seed, as_bytes("suci-nonce")))),
        amf_(sn_, session_),
        ausf_(session_),
        udm_(store, sc.policy, sc.rng_seed, session_),
        rng_(be_decode(ByteView(sha256(sc.rng_seed)).first(8))) {
    hits_.assign(net_.rules().size(), 0);
  }

  RunResult run() {
    send(amf_.start());
    bool over_budget = false;
    while (!queue_.empty()) {
      const std::size_t pick = next_index();
      if (queue_[pick].due > sc_.tick_budget) {
        over_budget = true;
        break;
      }
      InFlight item = std::move(queue_[pick]);
      queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(pick));
      tick_ = item.due;
      if (item.replayed) item.trace_index = log_message(item.env, {"replayed"});
      ++counters_.delivered;
      deliver(item.env);
    }

    for (const auto& item : queue_) {
      if (!item.replayed) trace_[item.trace_index].flags.push_back("pending");
    }
    counters_.pending = queue_.size();

    RunResult r;
    r.trace = std::move(trace_);
    r.ticks = over_budget ? sc_.tick_budget : tick_;
    r.messages = counters_.sent;
    r.payload_bytes = payload_bytes_;
    r.counters = counters_;
    r.method = method_;
    r.av = av_;
    r.ue = ue_.session();
    r.amf = amf_.session();
    r.ausf = ausf_.session();
    r.protocol_error = protocol_error_;
    r.outcome = verdict(r.ue);
    return r;
  }

 private:
  static std::string make_session(const Scenario& sc, const SubscriberRecord& sub) {
    const auto d = hmac_sha256(sc.rng_seed, concat({as_bytes("session"), as_bytes(sub.supi.imsi())}));
    return "s-" + to_hex(ByteView(d).first(6));
  }

  Outcome verdict(const UeSession& ue) const {
    if (ue.state == UeState::Authenticated) return Outcome::Success;
    if (ue.state == UeState::Failed && ue.failure) return outcome_of(*ue.failure);
    return protocol_error_ ? Outcome::ProtocolError : Outcome::Timeout;
  }

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  /// Earliest due envelope; ties resolve by send order unless the link reorders.
  std::size_t next_index() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < queue_.size(); ++i) {
      const auto& a = queue_[i];
      const auto& b = queue_[best];
      if (a.due < b.due || (a.due == b.due && a.seq < b.seq)) best = i;
    }
    const Interface iface = queue_[best].env.interface();
    if (!net_.faults(iface).reorder) return best;
    std::vector<std::size_t> same;
    for (std::size_t i = 0; i < queue_.size(); ++i) {
      if (queue_[i].due == queue_[best].due && queue_[i].env.interface() == iface) same.push_back(i);
    }
    if (same.size() < 2) return best;
    return same[static_cast<std::size_t>(rng_() % same.size())];
  }

  std::size_t log_message(const Envelope& env, std::vector<std::string> flags) {
    TraceEvent e;
    e.tick = tick_;
    e.session = session_;
    e.kind = "message";
    e.from = to_string(env.from());
    e.to = to_string(env.to());
    e.interface = to_string(env.interface());
    e.event = env.name();
    if (const Bytes* eap = eap_bytes(env)) e.digest = to_hex(*eap);
    e.bytes = payload_bytes(env);
    e.flags = std::move(flags);
    trace_.push_back(std::move(e));
    return trace_.size() - 1;
  }

  void log_decision(const Decision& d, Interface iface) {
    TraceEvent e;
    e.tick = tick_;
    e.session = session_;
    e.kind = "decision";
    e.from = to_string(d.entity);
    e.to = to_string(d.entity);
    e.interface = to_string(iface);
    e.event = d.event;
    e.detail = d.detail;
    trace_.push_back(std::move(e));
  }

  void send(Envelope env) {
    ++counters_.sent;
    payload_bytes_ += payload_bytes(env);
    const LinkFaults& link = net_.faults(env.interface());

    std::vector<std::string> flags;
    bool drop = false;
    std::optional<int> replay_delay;
    for (std::size_t i = 0; i < net_.rules().size(); ++i) {
      const AdversaryRule& rule = net_.rules()[i];
      if (rule.iface != env.interface()) continue;
      if (!rule.message.empty() && rule.message != env.name()) continue;
      if (rule.max_hits > 0 && hits_[i] >= rule.max_hits) continue;
      switch (rule.action) {
        case AdversaryAction::FlipBit:
          if (!apply_flip(env, rule)) continue;
          flags.emplace_back("tampered");
          break;
        case AdversaryAction::Drop:
          drop = true;
          break;
        case AdversaryAction::Replay:
          replay_delay = rule.replay_delay;
          break;
      }
      ++hits_[i];
    }
    if (!drop && link.drop_prob > 0.0 && uniform() < link.drop_prob) drop = true;
    if (drop) {
      flags.emplace_back("dropped");
      ++counters_.dropped;
      log_message(env, std::move(flags));
      return;
    }

    const std::int64_t due = tick_ + 1 + link.latency_ticks;
    const std::size_t idx = log_message(env, std::move(flags));
    if (replay_delay) {
      ++counters_.sent;
      ++counters_.replayed;
      payload_bytes_ += payload_bytes(env);
      queue_.push_back({due + *replay_delay, seq_++, env, 0, true});
    }
    queue_.push_back({due, seq_++, std::move(env), idx, false});
  }

  void deliver(const Envelope& env) {
    Transition t;
    try {
      if (const auto* info = env.get<AuthInfoResponse>()) {
        av_ = info->av;
        method_ = info->method;
      }
      switch (env.to()) {
        case Entity::Ue: t = ue_.handle(env); break;
        case Entity::Amf: t = amf_.handle(env); break;
        case Entity::Ausf: t = ausf_.handle(env); break;
        case Entity::Udm: t = udm_.handle(env); break;
        case Entity::DnAaa:
          throw Error(Errc::ProtocolViolation, "no DN-AAA in a 5GC session");
      }
    } catch (const Error& e) {
      protocol_error_ = true;
      log_decision({env.to(), "ProtocolViolation", e.what()}, env.interface());
      return;
    }
    for (const auto& d : t.decisions) log_decision(d, env.interface());
    for (auto& out : t.out) send(std::move(out));
  }

  const Scenario& sc_;
  SimNetwork net_;
  std::string session_;
  ServingNetworkContext sn_;
  Ue ue_;
  Amf amf_;
  Ausf ausf_;
  Udm udm_;
  std::mt19937_64 rng_;

  std::vector<InFlight> queue_;
  std::vector<int> hits_;
  std::vector<TraceEvent> trace_;
  NetworkCounters counters_;
  std::int64_t tick_ = 0;
  std::uint64_t seq_ = 0;
  std::size_t payload_bytes_ = 0;
  bool protocol_error_ = false;
  std::optional<AuthenticationVector> av_;
  std::optional<Method> method_;
};

SimNetwork network_for(const Scenario& sc) {
  SimNetwork net;
  for (const auto& [iface, f] : sc.faults) {
    if (!net.declared(iface)) {
      throw Error(Errc::ConfigError, "faults name undeclared interface " + std::string(to_string(iface)));
    }
    net.declare(iface, f);
  }
  for (const auto& rule : sc.adversary) net = inject(std::move(net), rule);
  return net;
}

}  // namespace

RunResult run_scenario(const Scenario& sc, SubscriberStore& store) {
  if (sc.rng_seed.empty()) throw Error(Errc::ConfigError, "scenario '" + sc.name + "' has no rng_seed");
  if (sc.tick_budget <= 0) throw Error(Errc::ConfigError, "tick_budget must be positive");

  std::optional<SubscriberRecord> sub;
  if (sc.subscriber.empty()) {
    auto all = store.records();
    if (all.empty()) throw Error(Errc::ConfigError, "subscriber store is empty");
    sub = std::move(all.front());
  } else {
    sub = store.find(sc.subscriber);
    if (!sub) throw Error(Errc::ConfigError, "subscriber " + sc.subscriber + " is not provisioned");
  }

  Loop loop(sc, store, std::move(*sub), network_for(sc));
  return loop.run();
}

RunResult run_5g_aka_flow(Scenario sc, SubscriberStore& store) {
  sc.policy.preference = {Method::FiveGAka};
  return run_scenario(sc, store);
}

}  // namespace akaprime
