#include "akaprime/wire.hpp"

#include <algorithm>

#include "akaprime/digest.hpp"
#include "akaprime/error.hpp"

namespace akaprime {

namespace {

constexpr std::size_t kHeaderLength = 4;
constexpr std::size_t kMethodHeaderLength = 8;
constexpr std::size_t kAttributeHeaderLength = 4;

std::size_t attribute_length(const Attribute& a) {
  const std::size_t raw = kAttributeHeaderLength + a.value.size();
  return (raw + 3) / 4 * 4;
}

void check_attribute(const Attribute& a) {
  if (a.value.size() > kMaxAttributeValue) {
    throw Error(Errc::AttributeTooLong, std::string(to_string(a.kind)) + " value of " +
                                            std::to_string(a.value.size()) + " bytes");
  }
  if (a.kind == AttributeKind::Mac && a.value.size() != kMacLength) {
    throw Error(Errc::BadMacLength, "AT_MAC must carry 16 bytes");
  }
}

Bytes mac_input(EapPacket p) {
  Attribute* mac = p.find(AttributeKind::Mac);
  if (mac == nullptr) throw Error(Errc::MissingMac, "packet has no AT_MAC");
  std::fill(mac->value.begin(), mac->value.end(), Byte{0});
  return encode_eap(p);
}

}  // namespace

std::string_view to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::Rand: return "AT_RAND";
    case AttributeKind::Autn: return "AT_AUTN";
    case AttributeKind::Res: return "AT_RES";
    case AttributeKind::Mac: return "AT_MAC";
    case AttributeKind::Identity: return "AT_IDENTITY";
    case AttributeKind::KdfInput: return "AT_KDF_INPUT";
    case AttributeKind::Kdf: return "AT_KDF";
  }
  return "AT_UNKNOWN";
}

bool is_known(AttributeKind kind) { return to_string(kind) != "AT_UNKNOWN"; }

EapPacket EapPacket::success(Byte identifier) {
  EapPacket p;
  p.code = EapCode::Success;
  p.identifier = identifier;
  return p;
}

EapPacket EapPacket::failure(Byte identifier) {
  EapPacket p;
  p.code = EapCode::Failure;
  p.identifier = identifier;
  return p;
}

const Attribute* EapPacket::find(AttributeKind kind) const {
  auto it = std::find_if(attributes.begin(), attributes.end(),
                         [kind](const Attribute& a) { return a.kind == kind; });
  return it == attributes.end() ? nullptr : &*it;
}

Attribute* EapPacket::find(AttributeKind kind) {
  return const_cast<Attribute*>(std::as_const(*this).find(kind));
}

std::size_t encoded_length(const EapPacket& p) {
  if (!p.carries_method_data()) return kHeaderLength;
  std::size_t n = kMethodHeaderLength;
  for (const auto& a : p.attributes) n += attribute_length(a);
  return n;
}

Bytes encode_eap(const EapPacket& p) {
  if (p.code < EapCode::Request || p.code > EapCode::Failure) {
    throw Error(Errc::InvalidPacket, "unknown EAP code");
  }
  if (!p.carries_method_data() && !p.attributes.empty()) {
    throw Error(Errc::InvalidPacket, "Success/Failure packets carry no attributes");
  }
  for (const auto& a : p.attributes) check_attribute(a);

  const std::size_t length = encoded_length(p);
  if (length > 0xFFFF) throw Error(Errc::InvalidPacket, "packet exceeds 65535 bytes");

  Bytes out;
  out.reserve(length);
  out.push_back(static_cast<Byte>(p.code));
  out.push_back(p.identifier);
  out.push_back(static_cast<Byte>(length >> 8));
  out.push_back(static_cast<Byte>(length));
  if (!p.carries_method_data()) return out;

  out.push_back(p.type);
  out.push_back(static_cast<Byte>(p.subtype));
  out.push_back(0);
  out.push_back(0);
  for (const auto& a : p.attributes) {
    const std::size_t total = attribute_length(a);
    out.push_back(static_cast<Byte>(a.kind));
    out.push_back(static_cast<Byte>(total / 4));
    out.push_back(static_cast<Byte>(a.value.size() >> 8));
    out.push_back(static_cast<Byte>(a.value.size()));
    out.insert(out.end(), a.value.begin(), a.value.end());
    out.resize(out.size() + (total - kAttributeHeaderLength - a.value.size()), 0);
  }
  return out;
}

EapPacket decode_eap(ByteView raw) {
  if (raw.size() < kHeaderLength) throw Error(Errc::TruncatedHeader, "fewer than 4 bytes");

  EapPacket p;
  const Byte code = raw[0];
  if (code < 1 || code > 4) throw Error(Errc::InvalidPacket, "unknown EAP code " + std::to_string(code));
  p.code = static_cast<EapCode>(code);
  p.identifier = raw[1];

  const std::size_t length = (std::size_t{raw[2]} << 8) | raw[3];
  if (length > raw.size()) throw Error(Errc::LengthMismatch, "length field exceeds buffer");
  if (length < raw.size()) throw Error(Errc::TrailingBytes, "bytes beyond declared length");

  if (!p.carries_method_data()) {
    if (length != kHeaderLength) throw Error(Errc::LengthMismatch, "Success/Failure must be 4 bytes");
    return p;
  }
  if (length < kMethodHeaderLength) throw Error(Errc::TruncatedHeader, "method header incomplete");

  p.type = raw[4];
  p.subtype = static_cast<EapSubtype>(raw[5]);
  if (raw[6] != 0 || raw[7] != 0) throw Error(Errc::BadReserved, "reserved bytes must be zero");

  std::size_t pos = kMethodHeaderLength;
  while (pos < length) {
    if (length - pos < kAttributeHeaderLength) throw Error(Errc::TruncatedAttribute, "attribute header incomplete");
    const std::size_t total = std::size_t{raw[pos + 1]} * 4;
    if (total < kAttributeHeaderLength || total > length - pos) {
      throw Error(Errc::TruncatedAttribute, "attribute length out of range");
    }
    const std::size_t value_len = (std::size_t{raw[pos + 2]} << 8) | raw[pos + 3];
    if (kAttributeHeaderLength + value_len > total) {
      throw Error(Errc::TruncatedAttribute, "value longer than attribute");
    }
    const std::size_t padding = total - kAttributeHeaderLength - value_len;
    if (padding >= 4) throw Error(Errc::BadPadding, "non-minimal attribute padding");
    const auto pad = raw.subspan(pos + kAttributeHeaderLength + value_len, padding);
    if (std::any_of(pad.begin(), pad.end(), [](Byte b) { return b != 0; })) {
      throw Error(Errc::BadPadding, "non-zero padding");
    }

    Attribute a;
    a.kind = static_cast<AttributeKind>(raw[pos]);
    const auto value = raw.subspan(pos + kAttributeHeaderLength, value_len);
    a.value.assign(value.begin(), value.end());
    if (a.kind == AttributeKind::Mac && a.value.size() != kMacLength) {
      throw Error(Errc::BadMacLength, "AT_MAC must carry 16 bytes");
    }
    p.attributes.push_back(std::move(a));
    pos += total;
  }
  return p;
}

EapPacket seal_mac(EapPacket p, ByteView k_aut) {
  const Bytes input = mac_input(p);
  const auto mac = take<kMacLength>(hmac_sha256(k_aut, input));
  Attribute* at_mac = p.find(AttributeKind::Mac);
  at_mac->value.assign(mac.begin(), mac.end());
  return p;
}

bool verify_mac(const EapPacket& p, ByteView k_aut) {
  const Attribute* at_mac = p.find(AttributeKind::Mac);
  if (at_mac == nullptr || at_mac->value.size() != kMacLength) return false;
  const auto expected = take<kMacLength>(hmac_sha256(k_aut, mac_input(p)));
  return equal_ct(expected, at_mac->value);
}

EapPacket make_challenge_request(Byte identifier, const Rand& rand, const Autn& autn,
                                 std::string_view snn) {
  EapPacket p;
  p.code = EapCode::Request;
  p.identifier = identifier;
  p.subtype = EapSubtype::AkaChallenge;
  const auto autn_bytes = autn.encode();
  p.attributes = {
      {AttributeKind::Rand, to_bytes(rand)},
      {AttributeKind::Autn, to_bytes(autn_bytes)},
      {AttributeKind::Kdf, {0x00, 0x01}},
      {AttributeKind::KdfInput, to_bytes(as_bytes(snn))},
      {AttributeKind::Mac, Bytes(kMacLength, 0)},
  };
  return p;
}

EapPacket make_challenge_response(Byte identifier, const Res& res) {
  EapPacket p;
  p.code = EapCode::Response;
  p.identifier = identifier;
  p.subtype = EapSubtype::AkaChallenge;
  p.attributes = {
      {AttributeKind::Res, to_bytes(res)},
      {AttributeKind::Mac, Bytes(kMacLength, 0)},
  };
  return p;
}

}  // namespace akaprime
