#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "akaprime/crypto.hpp"
#include "akaprime/envelope.hpp"
#include "akaprime/identity.hpp"
#include "akaprime/method.hpp"

namespace akaprime {

struct SubscriberRecord {
  Supi supi;
  RootCredential cred;
  std::set<Method> allowed_methods;
  std::string realm;
  SuciScheme concealment = SuciScheme::Null;
  HomeKey home_key{};
  Sqn ue_sqn = 0;  // highest SQN the USIM has accepted

  /// Throws ConfigError when allowed_methods is empty, the realm breaks the
  /// grammar, or the SQN does not fit in 48 bits.
  void validate() const;
};

/// In-memory subscriber table keyed by IMSI. SQN commits are serialized.
class SubscriberStore {
 public:
  SubscriberStore() = default;
  explicit SubscriberStore(std::vector<SubscriberRecord> records);
  SubscriberStore(const SubscriberStore& other);
  SubscriberStore& operator=(const SubscriberStore& other);

  void put(SubscriberRecord record);
  std::optional<SubscriberRecord> find(const std::string& imsi) const;
  /// Home keys of every subscriber in the given PLMN, deduplicated.
  std::vector<HomeKey> home_keys(const std::string& mcc, const std::string& mnc) const;
  void commit_sqn(const std::string& imsi, Sqn next);
  std::vector<SubscriberRecord> records() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, SubscriberRecord> by_imsi_;
};

/// Picks the most preferred method that the subscriber allows and the policy permits.
/// Throws MethodRejected when none qualifies.
Method udm_select_method(const SubscriberRecord& sub, const MethodPolicy& policy);

/// A named decision taken by an entity while handling one envelope.
struct Decision {
  Entity entity;
  std::string event;
  std::string detail;
};

struct Transition {
  std::vector<Envelope> out;
  std::vector<Decision> decisions;
};

/// Anchor keys held by a party after (or pending) authentication.
struct AnchorKeys {
  Octets<32> k_ausf{};
  Octets<32> k_seaf{};
  std::optional<KeyMaterial> eap;  // full EAP-AKA' hierarchy when that method ran
};

// ---------------------------------------------------------------- UE

enum class UeState { Idle, AwaitChallenge, Authenticated, Failed };
std::string_view to_string(UeState s);

struct UeSession {
  UeState state = UeState::Idle;
  std::string identity_sent;
  std::optional<AnchorKeys> keys;  // present iff Authenticated
  Sqn stored_sqn = 0;
  std::optional<FailureReason> failure;
};

class Ue {
 public:
  Ue(SubscriberRecord sub, ServingNetworkContext sn, std::string session_id, SuciNonce suci_nonce);

  /// Replies with the SUCI when concealment is enabled, otherwise the SUPI-derived NAI.
  Transition on_identity_request(const Envelope& env);
  /// Verifies MAC-A and SQN freshness, derives keys and answers with RES.
  /// Accepted while awaiting a challenge or after a completed run (re-authentication).
  Transition on_challenge(const Envelope& env);
  Transition on_success(const Envelope& env);
  Transition on_failure(const Envelope& env);

  Transition handle(const Envelope& env);

  const UeSession& session() const { return sess_; }

 private:
  Transition reject(FailureReason reason, std::string detail);
  Envelope send(Payload p) const;

  SubscriberRecord sub_;
  ServingNetworkContext sn_;
  std::string session_id_;
  SuciNonce suci_nonce_;
  UeSession sess_;
  std::optional<AnchorKeys> pending_;
  Byte eap_identifier_ = 0;
};

// ---------------------------------------------------------------- AMF / SEAF

enum class AmfState { Idle, AwaitAv, AwaitUeResponse, AwaitAusfVerdict, Done, Failed };
std::string_view to_string(AmfState s);

struct AmfSession {
  AmfState state = AmfState::Idle;
  ServingNetworkContext sn_ctx;
  std::optional<Octets<16>> hxres;
  std::string identity;
  std::optional<Rand> rand;
  std::optional<Octets<32>> k_seaf;
};

class Amf {
 public:
  Amf(ServingNetworkContext sn, std::string session_id);

  /// Opens the session with an identity request toward the UE.
  Envelope start() const;

  Transition on_identity_response(const Envelope& env);
  Transition on_challenge_forward(const Envelope& env);
  Transition on_auth_response(const Envelope& env);
  Transition on_success(const Envelope& env);
  Transition on_failure(const Envelope& env);

  Transition handle(const Envelope& env);

  const AmfSession& session() const { return sess_; }

 private:
  Envelope to_ue(Payload p) const;
  Envelope to_ausf(Payload p) const;

  std::string session_id_;
  AmfSession sess_;
};

// ---------------------------------------------------------------- AUSF

enum class AusfState { Idle, AwaitUdm, AwaitRes, Done, Failed };
std::string_view to_string(AusfState s);

struct AusfSession {
  AusfState state = AusfState::Idle;
  std::optional<Res> xres;
  std::optional<Octets<32>> k_ausf;
  std::optional<std::string> supi;  // IMSI resolved by the UDM
  std::string identity;
  std::string snn;
  Method method = Method::EapAkaPrime;
  std::optional<KeyMaterial> eap_keys;
  std::optional<Octets<32>> k_seaf;
  std::optional<Rand> rand;
  Byte eap_identifier = 1;
};

class Ausf {
 public:
  explicit Ausf(std::string session_id);

  Transition on_auth_request(const Envelope& env);
  /// Stores XRES, computes HXRES and forwards the challenge toward the AMF.
  Transition on_auth_info_response(const Envelope& env);
  Transition on_res_verify(const Envelope& env);
  Transition on_failure(const Envelope& env);

  Transition handle(const Envelope& env);

  const AusfSession& session() const { return sess_; }

 private:
  Envelope to_amf(Payload p) const;

  std::string session_id_;
  AusfSession sess_;
};

// ---------------------------------------------------------------- UDM

class Udm {
 public:
  Udm(SubscriberStore& store, MethodPolicy policy, Bytes rng_seed, std::string session_id);

  Transition on_auth_info_request(const Envelope& env);
  Transition handle(const Envelope& env);

  /// Resolves a SUPI NAI or SUCI string to a provisioned record.
  /// Throws SubscriberNotFound, IntegrityError or an identity parse error.
  SubscriberRecord resolve(const std::string& identity) const;

 private:
  Transition fail(FailureReason reason, std::string detail);

  SubscriberStore& store_;
  MethodPolicy policy_;
  Bytes rng_seed_;
  std::string session_id_;
};

}  // namespace akaprime
