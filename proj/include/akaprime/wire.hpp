#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "akaprime/bytes.hpp"
#include "akaprime/crypto.hpp"

namespace akaprime {

// EAP packet layout
//
//   Request/Response: code(1) id(1) length(2) type(1)=0x32 subtype(1) reserved(2)=0 attributes...
//   Success/Failure:  code(1) id(1) length(2)=4
//
// Attribute layout
//
//   kind(1) units(1) value_length(2) value padding
//
// `units` is the attribute length in 4-byte words. Padding is zero bytes up to
// the next 4-byte boundary and must be minimal.

inline constexpr Byte kEapTypeAkaPrime = 0x32;
inline constexpr std::size_t kMacLength = 16;
inline constexpr std::size_t kMaxAttributeValue = 255 * 4 - 4;

enum class EapCode : Byte { Request = 1, Response = 2, Success = 3, Failure = 4 };

enum class EapSubtype : Byte { AkaChallenge = 1, AkaIdentity = 5 };

enum class AttributeKind : Byte {
  Rand = 1,
  Autn = 2,
  Res = 3,
  Mac = 11,
  Identity = 14,
  KdfInput = 23,
  Kdf = 24,
};

std::string_view to_string(AttributeKind kind);
bool is_known(AttributeKind kind);

struct Attribute {
  AttributeKind kind{};
  Bytes value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct EapPacket {
  EapCode code = EapCode::Request;
  Byte identifier = 0;
  Byte type = kEapTypeAkaPrime;  // unused for Success/Failure
  EapSubtype subtype = EapSubtype::AkaChallenge;
  std::vector<Attribute> attributes;

  static EapPacket success(Byte identifier);
  static EapPacket failure(Byte identifier);

  bool carries_method_data() const { return code == EapCode::Request || code == EapCode::Response; }
  const Attribute* find(AttributeKind kind) const;
  Attribute* find(AttributeKind kind);

  friend bool operator==(const EapPacket&, const EapPacket&) = default;
};

std::size_t encoded_length(const EapPacket& p);
Bytes encode_eap(const EapPacket& p);
EapPacket decode_eap(ByteView raw);

/// Fills AT_MAC with the first 16 bytes of HMAC-SHA-256(k_aut, packet with AT_MAC zeroed).
EapPacket seal_mac(EapPacket p, ByteView k_aut);
bool verify_mac(const EapPacket& p, ByteView k_aut);

/// EAP-Request/AKA'-Challenge: AT_RAND, AT_AUTN, AT_KDF(1), AT_KDF_INPUT(snn), AT_MAC (zeroed).
EapPacket make_challenge_request(Byte identifier, const Rand& rand, const Autn& autn,
                                 std::string_view snn);

/// EAP-Response/AKA'-Challenge: AT_RES, AT_MAC (zeroed).
EapPacket make_challenge_response(Byte identifier, const Res& res);

}  // namespace akaprime
