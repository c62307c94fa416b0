#include "akaprime/envelope.hpp"

#include <array>
#include <string>

#include "akaprime/error.hpp"

namespace akaprime {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Route {
  Interface iface;
  std::size_t payload_index;
  Entity from;
  Entity to;
};

template <class T>
std::size_t index_of() {
  return Payload(std::in_place_type<T>).index();
}

const std::vector<Route>& legal_routes() {
  static const std::vector<Route> routes{
      {Interface::N1_UE_AMF, index_of<IdentityRequest>(), Entity::Amf, Entity::Ue},
      {Interface::N1_UE_AMF, index_of<IdentityResponse>(), Entity::Ue, Entity::Amf},
      {Interface::N1_UE_AMF, index_of<ChallengeForward>(), Entity::Amf, Entity::Ue},
      {Interface::N1_UE_AMF, index_of<ChallengeResponse>(), Entity::Ue, Entity::Amf},
      {Interface::N1_UE_AMF, index_of<SuccessNotice>(), Entity::Amf, Entity::Ue},
      {Interface::N1_UE_AMF, index_of<FailureNotice>(), Entity::Amf, Entity::Ue},
      {Interface::N1_UE_AMF, index_of<FailureNotice>(), Entity::Ue, Entity::Amf},
      {Interface::N12_AMF_AUSF, index_of<AuthRequest>(), Entity::Amf, Entity::Ausf},
      {Interface::N12_AMF_AUSF, index_of<ChallengeForward>(), Entity::Ausf, Entity::Amf},
      {Interface::N12_AMF_AUSF, index_of<ResVerifyRequest>(), Entity::Amf, Entity::Ausf},
      {Interface::N12_AMF_AUSF, index_of<SuccessNotice>(), Entity::Ausf, Entity::Amf},
      {Interface::N12_AMF_AUSF, index_of<FailureNotice>(), Entity::Ausf, Entity::Amf},
      {Interface::N12_AMF_AUSF, index_of<FailureNotice>(), Entity::Amf, Entity::Ausf},
      {Interface::N13_AUSF_UDM, index_of<AuthInfoRequest>(), Entity::Ausf, Entity::Udm},
      {Interface::N13_AUSF_UDM, index_of<AuthInfoResponse>(), Entity::Udm, Entity::Ausf},
      {Interface::N13_AUSF_UDM, index_of<FailureNotice>(), Entity::Udm, Entity::Ausf},
      {Interface::N6_DNAAA, index_of<IdentityResponse>(), Entity::Amf, Entity::DnAaa},
      {Interface::N6_DNAAA, index_of<SuccessNotice>(), Entity::DnAaa, Entity::Amf},
      {Interface::N6_DNAAA, index_of<FailureNotice>(), Entity::DnAaa, Entity::Amf},
  };
  return routes;
}

std::size_t opt_size(const std::optional<Bytes>& b) { return b ? b->size() : 0; }

void put_eap(nlohmann::ordered_json& j, const std::optional<Bytes>& eap) {
  if (eap) j["eap"] = to_hex(*eap);
}

}  // namespace

std::string_view to_string(Interface i) {
  switch (i) {
    case Interface::N1_UE_AMF: return "N1_UE_AMF";
    case Interface::N12_AMF_AUSF: return "N12_AMF_AUSF";
    case Interface::N13_AUSF_UDM: return "N13_AUSF_UDM";
    case Interface::N6_DNAAA: return "N6_DNAAA";
  }
  return "?";
}

Interface interface_from_string(std::string_view name) {
  for (auto i : {Interface::N1_UE_AMF, Interface::N12_AMF_AUSF, Interface::N13_AUSF_UDM,
                 Interface::N6_DNAAA}) {
    if (to_string(i) == name) return i;
  }
  if (name == "N1") return Interface::N1_UE_AMF;
  if (name == "N12") return Interface::N12_AMF_AUSF;
  if (name == "N13") return Interface::N13_AUSF_UDM;
  if (name == "N6") return Interface::N6_DNAAA;
  throw Error(Errc::ConfigError, "unknown interface '" + std::string(name) + "'");
}

std::string_view to_string(Entity e) {
  switch (e) {
    case Entity::Ue: return "UE";
    case Entity::Amf: return "AMF";
    case Entity::Ausf: return "AUSF";
    case Entity::Udm: return "UDM";
    case Entity::DnAaa: return "DN-AAA";
  }
  return "?";
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::MacFailure: return "MAC_FAILURE";
    case FailureReason::SqnFailure: return "SQN_FAILURE";
    case FailureReason::HresMismatch: return "HRES_MISMATCH";
    case FailureReason::XresMismatch: return "XRES_MISMATCH";
    case FailureReason::MethodRejected: return "METHOD_REJECTED";
    case FailureReason::SubscriberNotFound: return "SUBSCRIBER_NOT_FOUND";
    case FailureReason::IntegrityFailure: return "INTEGRITY_FAILURE";
    case FailureReason::ProtocolError: return "PROTOCOL_ERROR";
  }
  return "?";
}

std::string_view message_name(const Payload& p) {
  static constexpr std::array<std::string_view, std::variant_size_v<Payload>> kNames{
      "IdentityRequest", "IdentityResponse", "AuthRequest",     "AuthInfoRequest",
      "AuthInfoResponse", "ChallengeForward", "ChallengeResponse", "ResVerifyRequest",
      "SuccessNotice",   "FailureNotice"};
  return kNames[p.index()];
}

Envelope Envelope::make(std::string session_id, Interface iface, Entity from, Entity to,
                        Payload payload) {
  bool legal = false;
  for (const auto& r : legal_routes()) {
    if (r.iface == iface && r.payload_index == payload.index() && r.from == from && r.to == to) {
      legal = true;
      break;
    }
  }
  if (!legal) {
    throw Error(Errc::ProtocolViolation, std::string(message_name(payload)) + " from " +
                                             std::string(to_string(from)) + " to " +
                                             std::string(to_string(to)) + " is not legal on " +
                                             std::string(to_string(iface)));
  }
  if (iface == Interface::N1_UE_AMF || iface == Interface::N6_DNAAA) {
    if (auto* c = std::get_if<ChallengeForward>(&payload); c && c->hxres) {
      throw Error(Errc::ProtocolViolation, "HXRES must not leave the core network");
    }
    if (auto* s = std::get_if<SuccessNotice>(&payload); s && s->k_seaf) {
      throw Error(Errc::ProtocolViolation, "K_seaf must not leave the core network");
    }
  }
  Envelope e;
  e.session_id_ = std::move(session_id);
  e.interface_ = iface;
  e.from_ = from;
  e.to_ = to;
  e.payload_ = std::move(payload);
  return e;
}

const Bytes* eap_bytes(const Envelope& e) {
  return std::visit(
      [](const auto& p) -> const Bytes* {
        if constexpr (requires { p.eap; }) {
          return p.eap ? &*p.eap : nullptr;
        } else {
          return nullptr;
        }
      },
      e.payload());
}

std::size_t payload_bytes(const Envelope& e) {
  return std::visit(
      Overloaded{
          [](const IdentityRequest&) -> std::size_t { return 0; },
          [](const IdentityResponse& p) -> std::size_t { return p.identity.size(); },
          [](const AuthRequest& p) -> std::size_t { return p.identity.size() + p.snn.size(); },
          [](const AuthInfoRequest& p) -> std::size_t { return p.identity.size() + p.snn.size(); },
          [](const AuthInfoResponse& p) -> std::size_t {
            std::size_t n = 16 + 16 + 8 + 16 + 16 + 32 + 1 + p.supi.size();
            if (p.keys.eap) n += kMasterKeyLength;
            return n;
          },
          [](const ChallengeForward& p) -> std::size_t {
            return 16 + 16 + (p.hxres ? 16 : 0) + opt_size(p.eap);
          },
          [](const ChallengeResponse& p) -> std::size_t {
            return (p.res ? 8 : 0) + opt_size(p.eap);
          },
          [](const ResVerifyRequest& p) -> std::size_t {
            return 8 + p.supi.size() + p.snn.size() + opt_size(p.eap);
          },
          [](const SuccessNotice& p) -> std::size_t { return (p.k_seaf ? 32 : 0) + opt_size(p.eap); },
          [](const FailureNotice& p) -> std::size_t { return 1 + opt_size(p.eap); },
      },
      e.payload());
}

nlohmann::ordered_json to_json(const Envelope& e) {
  nlohmann::ordered_json fields = nlohmann::ordered_json::object();
  std::visit(Overloaded{
                 [](const IdentityRequest&) {},
                 [&](const IdentityResponse& p) { fields["identity"] = p.identity; },
                 [&](const AuthRequest& p) {
                   fields["identity"] = p.identity;
                   fields["snn"] = p.snn;
                 },
                 [&](const AuthInfoRequest& p) {
                   fields["identity"] = p.identity;
                   fields["snn"] = p.snn;
                 },
                 [&](const AuthInfoResponse& p) {
                   fields["method"] = to_string(p.method);
                   fields["supi"] = p.supi;
                   fields["rand"] = to_hex(p.av.rand);
                   fields["autn"] = to_hex(p.av.autn.encode());
                   fields["xres"] = to_hex(p.av.xres);
                   fields["k_ausf"] = fingerprint(p.keys.k_ausf);
                 },
                 [&](const ChallengeForward& p) {
                   fields["rand"] = to_hex(p.rand);
                   fields["autn"] = to_hex(p.autn.encode());
                   if (p.hxres) fields["hxres"] = to_hex(*p.hxres);
                   put_eap(fields, p.eap);
                 },
                 [&](const ChallengeResponse& p) {
                   if (p.res) fields["res"] = to_hex(*p.res);
                   put_eap(fields, p.eap);
                 },
                 [&](const ResVerifyRequest& p) {
                   fields["res"] = to_hex(p.res);
                   fields["supi"] = p.supi;
                   fields["snn"] = p.snn;
                   put_eap(fields, p.eap);
                 },
                 [&](const SuccessNotice& p) {
                   if (p.k_seaf) fields["k_seaf"] = fingerprint(*p.k_seaf);
                   put_eap(fields, p.eap);
                 },
                 [&](const FailureNotice& p) {
                   fields["reason"] = to_string(p.reason);
                   put_eap(fields, p.eap);
                 },
             },
             e.payload());

  nlohmann::ordered_json j;
  j["session"] = e.session_id();
  j["interface"] = to_string(e.interface());
  j["from"] = to_string(e.from());
  j["to"] = to_string(e.to());
  j["message"] = e.name();
  j["fields"] = std::move(fields);
  return j;
}

}  // namespace akaprime
