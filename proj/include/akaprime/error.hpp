#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace akaprime {

enum class Errc {
  InvalidHex,
  InvalidIdentity,
  // NAI parsing
  MissingSeparator,
  RealmGrammar,
  NonDigitUsername,
  ImsiLength,
  RealmImsiMismatch,
  UnknownMethodHint,
  // SUCI
  IntegrityError,
  UnsupportedScheme,
  // crypto
  InvalidLength,
  PrfLengthExceeded,
  SqnOverflow,
  // EAP codec
  TruncatedHeader,
  LengthMismatch,
  TrailingBytes,
  TruncatedAttribute,
  BadPadding,
  BadReserved,
  AttributeTooLong,
  BadMacLength,
  MissingMac,
  InvalidPacket,
  // entities
  ProtocolViolation,
  ValidationError,
  MethodRejected,
  SubscriberNotFound,
  // harness / federation / cli
  ConfigError,
  NoRoute,
  IoError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace akaprime
