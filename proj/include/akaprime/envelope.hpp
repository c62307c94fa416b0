#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "akaprime/bytes.hpp"
#include "akaprime/crypto.hpp"
#include "akaprime/method.hpp"

namespace akaprime {

enum class Interface { N1_UE_AMF, N12_AMF_AUSF, N13_AUSF_UDM, N6_DNAAA };
enum class Entity { Ue, Amf, Ausf, Udm, DnAaa };

std::string_view to_string(Interface i);
Interface interface_from_string(std::string_view name);
std::string_view to_string(Entity e);

enum class FailureReason {
  MacFailure,
  SqnFailure,
  HresMismatch,
  XresMismatch,
  MethodRejected,
  SubscriberNotFound,
  IntegrityFailure,
  ProtocolError,
};

std::string_view to_string(FailureReason r);

struct IdentityRequest {};

struct IdentityResponse {
  std::string identity;
};

struct AuthRequest {
  std::string identity;
  std::string snn;
};

struct AuthInfoRequest {
  std::string identity;
  std::string snn;
};

/// Home-side anchor material handed from UDM to AUSF.
struct HomeKeys {
  Octets<32> k_ausf{};
  std::optional<KeyMaterial> eap;  // present for EAP-AKA'
};

struct AuthInfoResponse {
  AuthenticationVector av;
  HomeKeys keys;
  Method method = Method::EapAkaPrime;
  std::string supi;  // resolved IMSI
};

/// AUSF→AMF carries hxres; the AMF→UE leg is the same shape with hxres stripped.
struct ChallengeForward {
  Rand rand{};
  Autn autn;
  std::optional<Octets<16>> hxres;
  std::optional<Bytes> eap;
};

/// EAP-AKA' carries RES inside AT_RES; 5G-AKA carries it raw.
struct ChallengeResponse {
  std::optional<Res> res;
  std::optional<Bytes> eap;
};

struct ResVerifyRequest {
  Res res{};
  std::string supi;  // identifier held by the AMF
  std::string snn;
  std::optional<Bytes> eap;
};

struct SuccessNotice {
  std::optional<Octets<32>> k_seaf;  // absent on N1
  std::optional<Bytes> eap;
};

struct FailureNotice {
  FailureReason reason = FailureReason::ProtocolError;
  std::optional<Bytes> eap;
};

using Payload = std::variant<IdentityRequest, IdentityResponse, AuthRequest, AuthInfoRequest,
                             AuthInfoResponse, ChallengeForward, ChallengeResponse,
                             ResVerifyRequest, SuccessNotice, FailureNotice>;

std::string_view message_name(const Payload& p);

class Envelope {
 public:
  /// Throws ProtocolViolation when the payload is not legal on `iface`, when
  /// (from, to) are not the endpoints of `iface`, or when an N1 payload carries
  /// network-only secrets (hxres, k_seaf).
  static Envelope make(std::string session_id, Interface iface, Entity from, Entity to, Payload payload);

  const std::string& session_id() const { return session_id_; }
  Interface interface() const { return interface_; }
  Entity from() const { return from_; }
  Entity to() const { return to_; }
  const Payload& payload() const { return payload_; }
  /// Mutable access for in-flight tampering; the variant alternative must not change.
  Payload& mutable_payload() { return payload_; }

  std::string_view name() const { return message_name(payload_); }

  template <class T>
  const T* get() const {
    return std::get_if<T>(&payload_);
  }

 private:
  Envelope() = default;

  std::string session_id_;
  Interface interface_ = Interface::N1_UE_AMF;
  Entity from_ = Entity::Amf;
  Entity to_ = Entity::Ue;
  Payload payload_;
};

/// Encoded EAP bytes carried by the envelope, if any.
const Bytes* eap_bytes(const Envelope& e);

/// Sum of the byte-valued fields of the payload (strings counted by length).
std::size_t payload_bytes(const Envelope& e);

nlohmann::ordered_json to_json(const Envelope& e);

}  // namespace akaprime
