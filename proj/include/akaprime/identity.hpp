#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "akaprime/bytes.hpp"

namespace akaprime {

/// Subscription permanent identifier in IMSI form: mcc ‖ mnc ‖ msin, 15 digits.
class Supi {
 public:
  /// Validates digit-only fields, 3-digit mcc, 2–3 digit mnc and a total of 15 digits.
  static Supi make(std::string mcc, std::string mnc, std::string msin);

  /// Splits an IMSI using the given mnc width (2 or 3).
  static Supi from_imsi(std::string_view imsi, std::size_t mnc_digits);

  const std::string& mcc() const { return mcc_; }
  const std::string& mnc() const { return mnc_; }
  const std::string& msin() const { return msin_; }
  std::string imsi() const { return mcc_ + mnc_ + msin_; }

  friend bool operator==(const Supi&, const Supi&) = default;

 private:
  Supi(std::string mcc, std::string mnc, std::string msin)
      : mcc_(std::move(mcc)), mnc_(std::move(mnc)), msin_(std::move(msin)) {}

  std::string mcc_;
  std::string mnc_;
  std::string msin_;
};

// Leading username digit of a 3GPP-style NAI: 0 EAP-AKA, 1 EAP-SIM, 6 EAP-AKA'.
enum class MethodHint { EapAka, EapSim, EapAkaPrime, Unknown };

std::string_view to_string(MethodHint hint);

struct Nai {
  std::string username;  // prefix digit ‖ imsi
  std::string realm;
  MethodHint method_hint = MethodHint::Unknown;
  std::string imsi;
  std::string mcc;  // 3 digits, from the realm
  std::string mnc;  // 3 digits, zero padded, from the realm

  std::string full() const { return username + "@" + realm; }
};

/// wlan.mnc{mnc:03}.mcc{mcc:03}.3gppnetwork.org
std::string wlan_realm(std::string_view mcc, std::string_view mnc);
bool is_wlan_realm(std::string_view realm);

Nai build_nai(const Supi& supi, MethodHint hint);
Nai parse_nai(std::string_view raw);

enum class SuciScheme { Null, SymTest };

std::string_view to_string(SuciScheme scheme);
SuciScheme suci_scheme_from_string(std::string_view name);

using HomeKey = Octets<32>;
using SuciNonce = Octets<16>;

struct Suci {
  SuciScheme scheme = SuciScheme::Null;
  std::string mcc;
  std::string mnc;
  SuciNonce nonce{};
  Bytes ciphertext;
  Octets<16> tag{};

  friend bool operator==(const Suci&, const Suci&) = default;
};

Suci conceal_supi(const Supi& supi, const HomeKey& home_key, const SuciNonce& nonce,
                  SuciScheme scheme);

/// Verifies the tag (SymTest) before decrypting. Throws IntegrityError or InvalidIdentity.
Supi deconceal_suci(const Suci& suci, const HomeKey& home_key);

/// Text form carried in identity messages:
/// suci-0-{mcc}-{mnc}-{null|symtest}-{nonce hex}-{ciphertext hex}-{tag hex}
std::string format_suci(const Suci& suci);
Suci parse_suci(std::string_view text);
bool looks_like_suci(std::string_view text);

struct ServingNetworkContext {
  std::string snn;
  std::string snid;

  friend bool operator==(const ServingNetworkContext&, const ServingNetworkContext&) = default;
};

/// snn = "5G:mnc{mnc:03}.mcc{mcc:03}.3gppnetwork.org", snid = "mnc{mnc:03}.mcc{mcc:03}".
ServingNetworkContext derive_snn(std::string_view mcc, std::string_view mnc);

}  // namespace akaprime
