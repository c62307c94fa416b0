#include "akaprime/bytes.hpp"

#include <openssl/crypto.h>

#include "akaprime/error.hpp"

namespace akaprime {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (Byte b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(Errc::InvalidHex, "odd number of hex digits");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::InvalidHex, "bad hex digit in '" + std::string(hex) + "'");
    out.push_back(static_cast<Byte>((hi << 4) | lo));
  }
  return out;
}

template <std::size_t N>
Octets<N> octets_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != N) {
    throw Error(Errc::InvalidLength,
                "expected " + std::to_string(N) + " bytes, got " + std::to_string(raw.size()));
  }
  return take<N>(raw);
}

template Octets<2> octets_from_hex<2>(std::string_view);
template Octets<6> octets_from_hex<6>(std::string_view);
template Octets<8> octets_from_hex<8>(std::string_view);
template Octets<16> octets_from_hex<16>(std::string_view);
template Octets<32> octets_from_hex<32>(std::string_view);

Bytes concat(std::initializer_list<ByteView> parts) {
  std::size_t total = 0;
  for (auto p : parts) total += p.size();
  Bytes out;
  out.reserve(total);
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Bytes be_encode(std::uint64_t value, std::size_t width) {
  Bytes out(width);
  for (std::size_t i = 0; i < width; ++i) {
    out[width - 1 - i] = static_cast<Byte>(value >> (8 * i));
  }
  return out;
}

std::uint64_t be_decode(ByteView v) {
  std::uint64_t out = 0;
  for (Byte b : v) out = (out << 8) | b;
  return out;
}

bool equal_ct(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidHex: return "InvalidHex";
    case Errc::InvalidIdentity: return "InvalidIdentity";
    case Errc::MissingSeparator: return "MissingSeparator";
    case Errc::RealmGrammar: return "RealmGrammar";
    case Errc::NonDigitUsername: return "NonDigitUsername";
    case Errc::ImsiLength: return "ImsiLength";
    case Errc::RealmImsiMismatch: return "RealmImsiMismatch";
    case Errc::UnknownMethodHint: return "UnknownMethodHint";
    case Errc::IntegrityError: return "IntegrityError";
    case Errc::UnsupportedScheme: return "UnsupportedScheme";
    case Errc::InvalidLength: return "InvalidLength";
    case Errc::PrfLengthExceeded: return "PrfLengthExceeded";
    case Errc::SqnOverflow: return "SqnOverflow";
    case Errc::TruncatedHeader: return "TruncatedHeader";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TrailingBytes: return "TrailingBytes";
    case Errc::TruncatedAttribute: return "TruncatedAttribute";
    case Errc::BadPadding: return "BadPadding";
    case Errc::BadReserved: return "BadReserved";
    case Errc::AttributeTooLong: return "AttributeTooLong";
    case Errc::BadMacLength: return "BadMacLength";
    case Errc::MissingMac: return "MissingMac";
    case Errc::InvalidPacket: return "InvalidPacket";
    case Errc::ProtocolViolation: return "ProtocolViolation";
    case Errc::ValidationError: return "ValidationError";
    case Errc::MethodRejected: return "MethodRejected";
    case Errc::SubscriberNotFound: return "SubscriberNotFound";
    case Errc::ConfigError: return "ConfigError";
    case Errc::NoRoute: return "NoRoute";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace akaprime
