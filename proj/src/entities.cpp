#include "akaprime/entities.hpp"

#include <algorithm>

#include "akaprime/error.hpp"
#include "akaprime/wire.hpp"

namespace akaprime {

namespace {

[[noreturn]] void violation(std::string_view who, std::string_view what, std::string_view state) {
  throw Error(Errc::ProtocolViolation,
              std::string(who) + " cannot handle " + std::string(what) + " in state " + std::string(state));
}

template <class T>
const T& expect(const Envelope& env, std::string_view who) {
  const T* p = env.get<T>();
  if (p == nullptr) {
    throw Error(Errc::ProtocolViolation, std::string(who) + " got unexpected " + std::string(env.name()));
  }
  return *p;
}

/// Decodes an EAP payload; entity state machines reject unknown attributes.
EapPacket decode_strict(const Bytes& raw) {
  EapPacket p = decode_eap(raw);
  if (p.carries_method_data() && p.type != kEapTypeAkaPrime) {
    throw Error(Errc::ValidationError, "EAP type is not EAP-AKA'");
  }
  for (const auto& a : p.attributes) {
    if (!is_known(a.kind)) {
      throw Error(Errc::ValidationError,
                  "unknown attribute kind " + std::to_string(static_cast<int>(a.kind)));
    }
  }
  return p;
}

}  // namespace

// ---------------------------------------------------------------- subscribers

void SubscriberRecord::validate() const {
  if (allowed_methods.empty()) throw Error(Errc::ConfigError, "subscriber " + supi.imsi() + " allows no method");
  if (!is_wlan_realm(realm)) throw Error(Errc::ConfigError, "subscriber realm '" + realm + "' breaks the grammar");
  if (cred.sqn >= kSqnLimit || ue_sqn >= kSqnLimit) throw Error(Errc::ConfigError, "SQN exceeds 48 bits");
}

SubscriberStore::SubscriberStore(std::vector<SubscriberRecord> records) {
  for (auto& r : records) put(std::move(r));
}

SubscriberStore::SubscriberStore(const SubscriberStore& other) {
  std::lock_guard lock(other.mu_);
  by_imsi_ = other.by_imsi_;
}

SubscriberStore& SubscriberStore::operator=(const SubscriberStore& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  by_imsi_ = other.by_imsi_;
  return *this;
}

void SubscriberStore::put(SubscriberRecord record) {
  record.validate();
  std::lock_guard lock(mu_);
  const std::string imsi = record.supi.imsi();
  by_imsi_.insert_or_assign(imsi, std::move(record));
}

std::optional<SubscriberRecord> SubscriberStore::find(const std::string& imsi) const {
  std::lock_guard lock(mu_);
  auto it = by_imsi_.find(imsi);
  if (it == by_imsi_.end()) return std::nullopt;
  return it->second;
}

std::vector<HomeKey> SubscriberStore::home_keys(const std::string& mcc, const std::string& mnc) const {
  std::lock_guard lock(mu_);
  std::vector<HomeKey> keys;
  for (const auto& [imsi, r] : by_imsi_) {
    if (r.supi.mcc() == mcc && r.supi.mnc() == mnc &&
        std::find(keys.begin(), keys.end(), r.home_key) == keys.end()) {
      keys.push_back(r.home_key);
    }
  }
  return keys;
}

void SubscriberStore::commit_sqn(const std::string& imsi, Sqn next) {
  std::lock_guard lock(mu_);
  auto it = by_imsi_.find(imsi);
  if (it == by_imsi_.end()) throw Error(Errc::SubscriberNotFound, "no subscriber " + imsi);
  it->second.cred.sqn = next;
}

std::vector<SubscriberRecord> SubscriberStore::records() const {
  std::lock_guard lock(mu_);
  std::vector<SubscriberRecord> out;
  out.reserve(by_imsi_.size());
  for (const auto& [imsi, r] : by_imsi_) out.push_back(r);
  return out;
}

std::size_t SubscriberStore::size() const {
  std::lock_guard lock(mu_);
  return by_imsi_.size();
}

Method udm_select_method(const SubscriberRecord& sub, const MethodPolicy& policy) {
  for (Method m : policy.preference) {
    if (sub.allowed_methods.contains(m) && policy.permits(m)) return m;
  }
  throw Error(Errc::MethodRejected, "no method allowed for " + sub.supi.imsi() + " on a " +
                                        std::string(to_string(policy.network_type)) + " network");
}

// ---------------------------------------------------------------- UE

std::string_view to_string(UeState s) {
  switch (s) {
    case UeState::Idle: return "IDLE";
    case UeState::AwaitChallenge: return "AWAIT_CHALLENGE";
    case UeState::Authenticated: return "AUTHENTICATED";
    case UeState::Failed: return "FAILED";
  }
  return "?";
}

Ue::Ue(SubscriberRecord sub, ServingNetworkContext sn, std::string session_id, SuciNonce suci_nonce)
    : sub_(std::move(sub)), sn_(std::move(sn)), session_id_(std::move(session_id)), suci_nonce_(suci_nonce) {
  sess_.stored_sqn = sub_.ue_sqn;
}

Envelope Ue::send(Payload p) const {
  return Envelope::make(session_id_, Interface::N1_UE_AMF, Entity::Ue, Entity::Amf, std::move(p));
}

Transition Ue::reject(FailureReason reason, std::string detail) {
  sess_.state = UeState::Failed;
  sess_.failure = reason;
  sess_.keys.reset();
  pending_.reset();
  Transition t;
  t.decisions.push_back({Entity::Ue, "AuthReject", std::string(to_string(reason)) + ": " + detail});
  t.out.push_back(send(FailureNotice{reason, std::nullopt}));
  return t;
}

Transition Ue::on_identity_request(const Envelope& env) {
  expect<IdentityRequest>(env, "UE");
  if (sess_.state != UeState::Idle) violation("UE", env.name(), to_string(sess_.state));

  if (sub_.concealment == SuciScheme::Null) {
    sess_.identity_sent = build_nai(sub_.supi, MethodHint::EapAkaPrime).full();
  } else {
    sess_.identity_sent = format_suci(conceal_supi(sub_.supi, sub_.home_key, suci_nonce_, sub_.concealment));
  }
  sess_.state = UeState::AwaitChallenge;
  Transition t;
  t.out.push_back(send(IdentityResponse{sess_.identity_sent}));
  return t;
}

Transition Ue::on_challenge(const Envelope& env) {
  const auto& ch = expect<ChallengeForward>(env, "UE");
  if (sess_.state != UeState::AwaitChallenge && sess_.state != UeState::Authenticated) {
    violation("UE", env.name(), to_string(sess_.state));
  }

  const AutnCheck check = check_autn(sub_.cred.k, ch.rand, ch.autn);
  if (!check.mac_ok) return reject(FailureReason::MacFailure, "MAC-A mismatch");
  if (check.sqn <= sess_.stored_sqn) {
    return reject(FailureReason::SqnFailure, "SQN " + std::to_string(check.sqn) +
                                                 " not above " + std::to_string(sess_.stored_sqn));
  }

  AnchorKeys keys;
  ChallengeResponse response;
  if (ch.eap) {
    EapPacket request;
    try {
      request = decode_strict(*ch.eap);
    } catch (const Error& e) {
      return reject(FailureReason::ProtocolError, e.what());
    }
    if (request.code != EapCode::Request || request.subtype != EapSubtype::AkaChallenge) {
      return reject(FailureReason::ProtocolError, "not an EAP-Request/AKA'-Challenge");
    }
    const Attribute* at_rand = request.find(AttributeKind::Rand);
    const Attribute* at_autn = request.find(AttributeKind::Autn);
    const auto autn_bytes = ch.autn.encode();
    if (at_rand == nullptr || at_autn == nullptr || !equal_ct(at_rand->value, ch.rand) ||
        !equal_ct(at_autn->value, autn_bytes)) {
      return reject(FailureReason::MacFailure, "AT_RAND/AT_AUTN disagree with the challenge");
    }
    const CkIkPrime primes =
        derive_ck_ik_prime(check.usim.ck, check.usim.ik, sn_.snn, ch.autn.sqn_xor_ak);
    KeyMaterial km =
        derive_master_keys(primes.ck_prime, primes.ik_prime, sess_.identity_sent, ch.rand, ch.autn);
    if (!verify_mac(request, km.k_aut)) return reject(FailureReason::MacFailure, "AT_MAC invalid");

    keys.k_ausf = km.k_ausf;
    keys.k_seaf = derive_k_seaf(keys.k_ausf, sn_.snn);
    km.k_seaf = keys.k_seaf;
    eap_identifier_ = request.identifier;
    response.eap = encode_eap(seal_mac(make_challenge_response(request.identifier, check.usim.xres), km.k_aut));
    keys.eap = std::move(km);
  } else {
    keys.k_ausf = derive_k_ausf_5g_aka(check.usim.ck, check.usim.ik, sn_.snn, ch.autn.sqn_xor_ak);
    keys.k_seaf = derive_k_seaf(keys.k_ausf, sn_.snn);
    response.res = check.usim.xres;
  }

  sess_.stored_sqn = check.sqn;
  sess_.keys.reset();
  sess_.state = UeState::AwaitChallenge;
  pending_ = std::move(keys);

  Transition t;
  t.out.push_back(send(std::move(response)));
  return t;
}

Transition Ue::on_success(const Envelope& env) {
  const auto& ok = expect<SuccessNotice>(env, "UE");
  if (sess_.state != UeState::AwaitChallenge || !pending_) violation("UE", env.name(), to_string(sess_.state));
  if (ok.eap) {
    const EapPacket p = decode_eap(*ok.eap);
    if (p.code != EapCode::Success) throw Error(Errc::ValidationError, "SuccessNotice without EAP-Success");
    if (p.identifier != eap_identifier_) throw Error(Errc::ValidationError, "EAP-Success identifier mismatch");
  }
  sess_.keys = std::move(pending_);
  pending_.reset();
  sess_.state = UeState::Authenticated;
  return {};
}

Transition Ue::on_failure(const Envelope& env) {
  const auto& f = expect<FailureNotice>(env, "UE");
  if (sess_.state == UeState::Idle) violation("UE", env.name(), to_string(sess_.state));
  if (!sess_.failure) sess_.failure = f.reason;
  sess_.state = UeState::Failed;
  sess_.keys.reset();
  pending_.reset();
  return {};
}

Transition Ue::handle(const Envelope& env) {
  if (std::holds_alternative<IdentityRequest>(env.payload())) return on_identity_request(env);
  if (std::holds_alternative<ChallengeForward>(env.payload())) return on_challenge(env);
  if (std::holds_alternative<SuccessNotice>(env.payload())) return on_success(env);
  if (std::holds_alternative<FailureNotice>(env.payload())) return on_failure(env);
  throw Error(Errc::ProtocolViolation, "UE has no handler for " + std::string(env.name()));
}

// ---------------------------------------------------------------- AMF

std::string_view to_string(AmfState s) {
  switch (s) {
    case AmfState::Idle: return "IDLE";
    case AmfState::AwaitAv: return "AWAIT_AV";
    case AmfState::AwaitUeResponse: return "AWAIT_UE_RESPONSE";
    case AmfState::AwaitAusfVerdict: return "AWAIT_AUSF_VERDICT";
    case AmfState::Done: return "DONE";
    case AmfState::Failed: return "FAILED";
  }
  return "?";
}

Amf::Amf(ServingNetworkContext sn, std::string session_id) : session_id_(std::move(session_id)) {
  sess_.sn_ctx = std::move(sn);
}

Envelope Amf::to_ue(Payload p) const {
  return Envelope::make(session_id_, Interface::N1_UE_AMF, Entity::Amf, Entity::Ue, std::move(p));
}

Envelope Amf::to_ausf(Payload p) const {
  return Envelope::make(session_id_, Interface::N12_AMF_AUSF, Entity::Amf, Entity::Ausf, std::move(p));
}

Envelope Amf::start() const { return to_ue(IdentityRequest{}); }

Transition Amf::on_identity_response(const Envelope& env) {
  const auto& id = expect<IdentityResponse>(env, "AMF");
  if (sess_.state != AmfState::Idle) violation("AMF", env.name(), to_string(sess_.state));
  if (id.identity.empty()) throw Error(Errc::ValidationError, "empty identity");

  sess_.identity = id.identity;
  sess_.state = AmfState::AwaitAv;
  Transition t;
  t.out.push_back(to_ausf(AuthRequest{sess_.identity, sess_.sn_ctx.snn}));
  return t;
}

Transition Amf::on_challenge_forward(const Envelope& env) {
  const auto& ch = expect<ChallengeForward>(env, "AMF");
  if (sess_.state != AmfState::AwaitAv) violation("AMF", env.name(), to_string(sess_.state));
  if (!ch.hxres) throw Error(Errc::ValidationError, "challenge from AUSF lacks HXRES");

  sess_.hxres = ch.hxres;
  sess_.rand = ch.rand;
  sess_.state = AmfState::AwaitUeResponse;
  Transition t;
  t.out.push_back(to_ue(ChallengeForward{ch.rand, ch.autn, std::nullopt, ch.eap}));
  return t;
}

Transition Amf::on_auth_response(const Envelope& env) {
  const auto& resp = expect<ChallengeResponse>(env, "AMF");
  if (sess_.state != AmfState::AwaitUeResponse) violation("AMF", env.name(), to_string(sess_.state));

  Res res{};
  if (resp.eap) {
    const EapPacket p = decode_strict(*resp.eap);
    const Attribute* at_res = p.find(AttributeKind::Res);
    if (at_res == nullptr) throw Error(Errc::ValidationError, "EAP response lacks AT_RES");
    if (at_res->value.size() != res.size()) throw Error(Errc::ValidationError, "AT_RES must carry 8 bytes");
    res = take<8>(at_res->value);
  } else if (resp.res) {
    res = *resp.res;
  } else {
    throw Error(Errc::ValidationError, "authentication response carries no RES");
  }

  Transition t;
  const auto hres = hashed_response(*sess_.rand, res);
  if (!equal_ct(hres, *sess_.hxres)) {
    t.decisions.push_back({Entity::Amf, "HresMismatch", "hres=" + to_hex(hres)});
    sess_.state = AmfState::Failed;
    t.out.push_back(to_ue(FailureNotice{FailureReason::HresMismatch, std::nullopt}));
    return t;
  }
  t.decisions.push_back({Entity::Amf, "HresVerified", "hres=" + to_hex(hres)});
  sess_.state = AmfState::AwaitAusfVerdict;
  t.out.push_back(to_ausf(ResVerifyRequest{res, sess_.identity, sess_.sn_ctx.snn, resp.eap}));
  return t;
}

Transition Amf::on_success(const Envelope& env) {
  const auto& ok = expect<SuccessNotice>(env, "AMF");
  if (sess_.state != AmfState::AwaitAusfVerdict) violation("AMF", env.name(), to_string(sess_.state));
  if (!ok.k_seaf) throw Error(Errc::ValidationError, "success from AUSF lacks K_seaf");

  sess_.k_seaf = ok.k_seaf;
  sess_.state = AmfState::Done;
  Transition t;
  t.out.push_back(to_ue(SuccessNotice{std::nullopt, ok.eap}));
  return t;
}

Transition Amf::on_failure(const Envelope& env) {
  const auto& f = expect<FailureNotice>(env, "AMF");
  Transition t;
  if (env.from() == Entity::Ue) {
    t.decisions.push_back({Entity::Amf, "UeRejected", std::string(to_string(f.reason))});
    sess_.state = AmfState::Failed;
    return t;
  }
  if (sess_.state != AmfState::AwaitAv && sess_.state != AmfState::AwaitAusfVerdict) {
    violation("AMF", env.name(), to_string(sess_.state));
  }
  sess_.state = AmfState::Failed;
  t.out.push_back(to_ue(FailureNotice{f.reason, f.eap}));
  return t;
}

Transition Amf::handle(const Envelope& env) {
  if (std::holds_alternative<IdentityResponse>(env.payload())) return on_identity_response(env);
  if (std::holds_alternative<ChallengeForward>(env.payload())) return on_challenge_forward(env);
  if (std::holds_alternative<ChallengeResponse>(env.payload())) return on_auth_response(env);
  if (std::holds_alternative<SuccessNotice>(env.payload())) return on_success(env);
  if (std::holds_alternative<FailureNotice>(env.payload())) return on_failure(env);
  throw Error(Errc::ProtocolViolation, "AMF has no handler for " + std::string(env.name()));
}

// ---------------------------------------------------------------- AUSF

std::string_view to_string(AusfState s) {
  switch (s) {
    case AusfState::Idle: return "IDLE";
    case AusfState::AwaitUdm: return "AWAIT_UDM";
    case AusfState::AwaitRes: return "AWAIT_RES";
    case AusfState::Done: return "DONE";
    case AusfState::Failed: return "FAILED";
  }
  return "?";
}

Ausf::Ausf(std::string session_id) : session_id_(std::move(session_id)) {}

Envelope Ausf::to_amf(Payload p) const {
  return Envelope::make(session_id_, Interface::N12_AMF_AUSF, Entity::Ausf, Entity::Amf, std::move(p));
}

Transition Ausf::on_auth_request(const Envelope& env) {
  const auto& req = expect<AuthRequest>(env, "AUSF");
  if (sess_.state != AusfState::Idle) violation("AUSF", env.name(), to_string(sess_.state));

  sess_.identity = req.identity;
  sess_.snn = req.snn;
  sess_.state = AusfState::AwaitUdm;
  Transition t;
  t.out.push_back(Envelope::make(session_id_, Interface::N13_AUSF_UDM, Entity::Ausf, Entity::Udm,
                                 AuthInfoRequest{req.identity, req.snn}));
  return t;
}

Transition Ausf::on_auth_info_response(const Envelope& env) {
  const auto& info = expect<AuthInfoResponse>(env, "AUSF");
  if (sess_.state != AusfState::AwaitUdm || sess_.xres) violation("AUSF", env.name(), to_string(sess_.state));
  if (info.method == Method::EapAkaPrime && !info.keys.eap) {
    throw Error(Errc::ValidationError, "EAP-AKA' vector without key material");
  }

  sess_.xres = info.av.xres;
  sess_.k_ausf = info.keys.k_ausf;
  sess_.supi = info.supi;
  sess_.method = info.method;
  sess_.eap_keys = info.keys.eap;
  sess_.rand = info.av.rand;

  const auto hxres = hashed_response(info.av.rand, info.av.xres);
  Transition t;
  t.decisions.push_back({Entity::Ausf, "XresStored", "hxres=" + to_hex(hxres)});

  ChallengeForward ch{info.av.rand, info.av.autn, hxres, std::nullopt};
  if (sess_.method == Method::EapAkaPrime) {
    const EapPacket req = make_challenge_request(sess_.eap_identifier, info.av.rand, info.av.autn, sess_.snn);
    ch.eap = encode_eap(seal_mac(req, sess_.eap_keys->k_aut));
  }
  sess_.state = AusfState::AwaitRes;
  t.out.push_back(to_amf(std::move(ch)));
  return t;
}

Transition Ausf::on_res_verify(const Envelope& env) {
  const auto& req = expect<ResVerifyRequest>(env, "AUSF");
  if (sess_.state != AusfState::AwaitRes) violation("AUSF", env.name(), to_string(sess_.state));
  if (req.supi != sess_.identity) throw Error(Errc::ValidationError, "identity differs from the authentication request");

  const bool eap = sess_.method == Method::EapAkaPrime;
  auto eap_result = [&](bool success) -> std::optional<Bytes> {
    if (!eap) return std::nullopt;
    return encode_eap(success ? EapPacket::success(sess_.eap_identifier) : EapPacket::failure(sess_.eap_identifier));
  };

  Transition t;
  if (!equal_ct(req.res, *sess_.xres)) {
    t.decisions.push_back({Entity::Ausf, "XresMismatch", "res=" + to_hex(req.res)});
    sess_.state = AusfState::Failed;
    t.out.push_back(to_amf(FailureNotice{FailureReason::XresMismatch, eap_result(false)}));
    return t;
  }
  if (eap) {
    if (!req.eap) throw Error(Errc::ValidationError, "EAP-AKA' response missing");
    if (!verify_mac(decode_strict(*req.eap), sess_.eap_keys->k_aut)) {
      t.decisions.push_back({Entity::Ausf, "MacInvalid", "EAP response AT_MAC"});
      sess_.state = AusfState::Failed;
      t.out.push_back(to_amf(FailureNotice{FailureReason::MacFailure, eap_result(false)}));
      return t;
    }
  }

  sess_.k_seaf = derive_k_seaf(*sess_.k_ausf, sess_.snn);
  if (sess_.eap_keys) sess_.eap_keys->k_seaf = sess_.k_seaf;
  t.decisions.push_back({Entity::Ausf, "ResVerified", "k_seaf=" + fingerprint(*sess_.k_seaf)});
  sess_.state = AusfState::Done;
  t.out.push_back(to_amf(SuccessNotice{sess_.k_seaf, eap_result(true)}));
  return t;
}

Transition Ausf::on_failure(const Envelope& env) {
  const auto& f = expect<FailureNotice>(env, "AUSF");
  Transition t;
  if (env.from() == Entity::Amf) {
    sess_.state = AusfState::Failed;
    return t;
  }
  if (sess_.state != AusfState::AwaitUdm) violation("AUSF", env.name(), to_string(sess_.state));
  sess_.state = AusfState::Failed;
  t.out.push_back(to_amf(FailureNotice{f.reason, f.eap}));
  return t;
}

Transition Ausf::handle(const Envelope& env) {
  if (std::holds_alternative<AuthRequest>(env.payload())) return on_auth_request(env);
  if (std::holds_alternative<AuthInfoResponse>(env.payload())) return on_auth_info_response(env);
  if (std::holds_alternative<ResVerifyRequest>(env.payload())) return on_res_verify(env);
  if (std::holds_alternative<FailureNotice>(env.payload())) return on_failure(env);
  throw Error(Errc::ProtocolViolation, "AUSF has no handler for " + std::string(env.name()));
}

// ---------------------------------------------------------------- UDM

Udm::Udm(SubscriberStore& store, MethodPolicy policy, Bytes rng_seed, std::string session_id)
    : store_(store), policy_(std::move(policy)), rng_seed_(std::move(rng_seed)), session_id_(std::move(session_id)) {}

SubscriberRecord Udm::resolve(const std::string& identity) const {
  std::string imsi;
  if (looks_like_suci(identity)) {
    const Suci suci = parse_suci(identity);
    if (suci.scheme == SuciScheme::Null) {
      imsi = deconceal_suci(suci, HomeKey{}).imsi();
    } else {
      const auto keys = store_.home_keys(suci.mcc, suci.mnc);
      if (keys.empty()) throw Error(Errc::SubscriberNotFound, "no home network " + suci.mcc + "/" + suci.mnc);
      for (const auto& key : keys) {
        try {
          imsi = deconceal_suci(suci, key).imsi();
          break;
        } catch (const Error& e) {
          if (e.code() != Errc::IntegrityError) throw;
        }
      }
      if (imsi.empty()) throw Error(Errc::IntegrityError, "SUCI tag does not verify under any home key");
    }
  } else {
    imsi = parse_nai(identity).imsi;
  }
  auto record = store_.find(imsi);
  if (!record) throw Error(Errc::SubscriberNotFound, "no subscriber " + imsi);
  return *record;
}

Transition Udm::fail(FailureReason reason, std::string detail) {
  Transition t;
  t.decisions.push_back({Entity::Udm, "UdmReject", std::string(to_string(reason)) + ": " + detail});
  t.out.push_back(Envelope::make(session_id_, Interface::N13_AUSF_UDM, Entity::Udm, Entity::Ausf,
                                 FailureNotice{reason, std::nullopt}));
  return t;
}

Transition Udm::on_auth_info_request(const Envelope& env) {
  const auto& req = expect<AuthInfoRequest>(env, "UDM");

  std::optional<SubscriberRecord> sub;
  try {
    sub = resolve(req.identity);
  } catch (const Error& e) {
    if (e.code() == Errc::IntegrityError) return fail(FailureReason::IntegrityFailure, e.what());
    return fail(FailureReason::SubscriberNotFound, e.what());
  }

  Method method{};
  try {
    method = udm_select_method(*sub, policy_);
  } catch (const Error& e) {
    return fail(FailureReason::MethodRejected, e.what());
  }

  Transition t;
  t.decisions.push_back({Entity::Udm, "MethodSelected",
                         std::string(to_string(method)) + " supi=" + sub->supi.imsi()});
  if (!method_info(method).simulated) {
    Transition f = fail(FailureReason::MethodRejected, std::string(display_name(method)) + " has no simulated flow");
    f.decisions.insert(f.decisions.begin(), t.decisions.begin(), t.decisions.end());
    return f;
  }

  GeneratedAv gen;
  try {
    gen = generate_av(sub->cred, req.snn, rng_seed_);
  } catch (const Error& e) {
    return fail(FailureReason::ProtocolError, e.what());
  }
  store_.commit_sqn(sub->supi.imsi(), gen.next_sqn);
  const AuthenticationVector& av = gen.av;
  t.decisions.push_back({Entity::Udm, "AvGenerated", "rand=" + to_hex(av.rand)});

  HomeKeys keys;
  if (method == Method::EapAkaPrime) {
    KeyMaterial km = derive_master_keys(av.ck_prime, av.ik_prime, req.identity, av.rand, av.autn);
    keys.k_ausf = km.k_ausf;
    keys.eap = std::move(km);
  } else {
    const UsimOutput usim = usim_functions(sub->cred, av.rand);
    keys.k_ausf = derive_k_ausf_5g_aka(usim.ck, usim.ik, req.snn, av.autn.sqn_xor_ak);
  }

  t.out.push_back(Envelope::make(session_id_, Interface::N13_AUSF_UDM, Entity::Udm, Entity::Ausf,
                                 AuthInfoResponse{av, std::move(keys), method, sub->supi.imsi()}));
  return t;
}

Transition Udm::handle(const Envelope& env) {
  if (std::holds_alternative<AuthInfoRequest>(env.payload())) return on_auth_info_request(env);
  throw Error(Errc::ProtocolViolation, "UDM has no handler for " + std::string(env.name()));
}

}  // namespace akaprime
