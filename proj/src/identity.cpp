#include "akaprime/identity.hpp"

#include <algorithm>
#include <regex>
#include <vector>

#include "akaprime/digest.hpp"
#include "akaprime/error.hpp"

namespace akaprime {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string pad3(std::string_view digits) {
  if (!all_digits(digits) || digits.size() > 3) {
    throw Error(Errc::InvalidIdentity, "expected 1-3 decimal digits, got '" + std::string(digits) + "'");
  }
  return std::string(3 - digits.size(), '0') + std::string(digits);
}

const std::regex& realm_grammar() {
  static const std::regex re(R"(^wlan\.mnc([0-9]{3})\.mcc([0-9]{3})\.3gppnetwork\.org$)");
  return re;
}

char prefix_digit(MethodHint hint) {
  switch (hint) {
    case MethodHint::EapAka: return '0';
    case MethodHint::EapSim: return '1';
    case MethodHint::EapAkaPrime: return '6';
    case MethodHint::Unknown: break;
  }
  throw Error(Errc::UnknownMethodHint, "no NAI prefix digit for unknown method");
}

MethodHint hint_from_prefix(char c) {
  switch (c) {
    case '0': return MethodHint::EapAka;
    case '1': return MethodHint::EapSim;
    case '6': return MethodHint::EapAkaPrime;
    default: return MethodHint::Unknown;
  }
}

Bytes suci_keystream(const HomeKey& key, const SuciNonce& nonce, std::size_t length) {
  static constexpr std::string_view kLabel = "suci-ks";
  Bytes out;
  auto first = hmac_sha256(key, concat({as_bytes(kLabel), nonce}));
  out.insert(out.end(), first.begin(), first.end());
  for (unsigned i = 2; out.size() < length; ++i) {
    const Byte counter = static_cast<Byte>(i);
    auto block = hmac_sha256(key, concat({as_bytes(kLabel), nonce, ByteView(&counter, 1)}));
    out.insert(out.end(), block.begin(), block.end());
  }
  out.resize(length);
  return out;
}

Octets<16> suci_tag(const HomeKey& key, const SuciNonce& nonce, ByteView ciphertext) {
  return take<16>(hmac_sha256(key, concat({as_bytes("suci-tag"), nonce, ciphertext})));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

}  // namespace

Supi Supi::make(std::string mcc, std::string mnc, std::string msin) {
  if (!all_digits(mcc) || !all_digits(mnc) || !all_digits(msin)) {
    throw Error(Errc::InvalidIdentity, "SUPI fields must be decimal digits");
  }
  if (mcc.size() != 3) throw Error(Errc::InvalidIdentity, "mcc must have 3 digits");
  if (mnc.size() < 2 || mnc.size() > 3) throw Error(Errc::InvalidIdentity, "mnc must have 2 or 3 digits");
  if (mcc.size() + mnc.size() + msin.size() != 15) {
    throw Error(Errc::InvalidIdentity, "imsi must have exactly 15 digits");
  }
  return Supi(std::move(mcc), std::move(mnc), std::move(msin));
}

Supi Supi::from_imsi(std::string_view imsi, std::size_t mnc_digits) {
  if (imsi.size() != 15) throw Error(Errc::InvalidIdentity, "imsi must have exactly 15 digits");
  if (mnc_digits != 2 && mnc_digits != 3) throw Error(Errc::InvalidIdentity, "mnc width must be 2 or 3");
  return make(std::string(imsi.substr(0, 3)), std::string(imsi.substr(3, mnc_digits)),
              std::string(imsi.substr(3 + mnc_digits)));
}

std::string_view to_string(MethodHint hint) {
  switch (hint) {
    case MethodHint::EapAka: return "EAP-AKA";
    case MethodHint::EapSim: return "EAP-SIM";
    case MethodHint::EapAkaPrime: return "EAP-AKA'";
    case MethodHint::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string wlan_realm(std::string_view mcc, std::string_view mnc) {
  return "wlan.mnc" + pad3(mnc) + ".mcc" + pad3(mcc) + ".3gppnetwork.org";
}

bool is_wlan_realm(std::string_view realm) {
  return std::regex_match(realm.begin(), realm.end(), realm_grammar());
}

Nai build_nai(const Supi& supi, MethodHint hint) {
  Nai nai;
  nai.username = std::string(1, prefix_digit(hint)) + supi.imsi();
  nai.realm = wlan_realm(supi.mcc(), supi.mnc());
  nai.method_hint = hint;
  nai.imsi = supi.imsi();
  nai.mcc = pad3(supi.mcc());
  nai.mnc = pad3(supi.mnc());
  return nai;
}

Nai parse_nai(std::string_view raw) {
  const auto at = raw.rfind('@');
  if (at == std::string_view::npos) throw Error(Errc::MissingSeparator, "no '@' in identity");

  Nai nai;
  nai.username = std::string(raw.substr(0, at));
  nai.realm = std::string(raw.substr(at + 1));

  std::smatch m;
  if (!std::regex_match(nai.realm, m, realm_grammar())) {
    throw Error(Errc::RealmGrammar, "realm '" + nai.realm + "' is not wlan.mncNNN.mccNNN.3gppnetwork.org");
  }
  nai.mnc = m[1].str();
  nai.mcc = m[2].str();

  if (!all_digits(nai.username)) throw Error(Errc::NonDigitUsername, "username must be decimal digits");
  nai.method_hint = hint_from_prefix(nai.username.front());
  nai.imsi = nai.username.substr(1);
  if (nai.imsi.size() != 15) {
    throw Error(Errc::ImsiLength, "imsi has " + std::to_string(nai.imsi.size()) + " digits, expected 15");
  }

  const bool mcc_ok = nai.imsi.compare(0, 3, nai.mcc) == 0;
  const bool mnc3_ok = nai.imsi.compare(3, 3, nai.mnc) == 0;
  const bool mnc2_ok = nai.mnc.front() == '0' && nai.imsi.compare(3, 2, nai.mnc, 1, 2) == 0;
  if (!mcc_ok || !(mnc3_ok || mnc2_ok)) {
    throw Error(Errc::RealmImsiMismatch, "imsi " + nai.imsi + " does not belong to realm " + nai.realm);
  }
  return nai;
}

std::string_view to_string(SuciScheme scheme) {
  switch (scheme) {
    case SuciScheme::Null: return "null";
    case SuciScheme::SymTest: return "symtest";
  }
  return "unknown";
}

SuciScheme suci_scheme_from_string(std::string_view name) {
  if (name == "null" || name == "NULL") return SuciScheme::Null;
  if (name == "symtest" || name == "SYM_TEST") return SuciScheme::SymTest;
  throw Error(Errc::UnsupportedScheme, "unknown SUCI scheme '" + std::string(name) + "'");
}

Suci conceal_supi(const Supi& supi, const HomeKey& home_key, const SuciNonce& nonce,
                  SuciScheme scheme) {
  Suci suci;
  suci.scheme = scheme;
  suci.mcc = supi.mcc();
  suci.mnc = supi.mnc();
  const ByteView msin = as_bytes(supi.msin());

  switch (scheme) {
    case SuciScheme::Null:
      suci.ciphertext = to_bytes(msin);
      return suci;
    case SuciScheme::SymTest: {
      suci.nonce = nonce;
      Bytes ks = suci_keystream(home_key, nonce, msin.size());
      suci.ciphertext.resize(msin.size());
      for (std::size_t i = 0; i < msin.size(); ++i) suci.ciphertext[i] = msin[i] ^ ks[i];
      suci.tag = suci_tag(home_key, nonce, suci.ciphertext);
      return suci;
    }
  }
  throw Error(Errc::UnsupportedScheme, "unknown SUCI scheme");
}

Supi deconceal_suci(const Suci& suci, const HomeKey& home_key) {
  std::string msin;
  switch (suci.scheme) {
    case SuciScheme::Null:
      msin.assign(suci.ciphertext.begin(), suci.ciphertext.end());
      break;
    case SuciScheme::SymTest: {
      if (!equal_ct(suci_tag(home_key, suci.nonce, suci.ciphertext), suci.tag)) {
        throw Error(Errc::IntegrityError, "SUCI tag mismatch");
      }
      Bytes ks = suci_keystream(home_key, suci.nonce, suci.ciphertext.size());
      msin.resize(suci.ciphertext.size());
      for (std::size_t i = 0; i < msin.size(); ++i) {
        msin[i] = static_cast<char>(suci.ciphertext[i] ^ ks[i]);
      }
      break;
    }
    default:
      throw Error(Errc::UnsupportedScheme, "unknown SUCI scheme");
  }
  return Supi::make(suci.mcc, suci.mnc, std::move(msin));
}

std::string format_suci(const Suci& suci) {
  return "suci-0-" + suci.mcc + "-" + suci.mnc + "-" + std::string(to_string(suci.scheme)) + "-" +
         to_hex(suci.nonce) + "-" + to_hex(suci.ciphertext) + "-" + to_hex(suci.tag);
}

bool looks_like_suci(std::string_view text) { return text.starts_with("suci-"); }

Suci parse_suci(std::string_view text) {
  auto parts = split(text, '-');
  if (parts.size() != 8 || parts[0] != "suci" || parts[1] != "0") {
    throw Error(Errc::InvalidIdentity, "malformed SUCI '" + std::string(text) + "'");
  }
  Suci suci;
  suci.mcc = std::string(parts[2]);
  suci.mnc = std::string(parts[3]);
  suci.scheme = suci_scheme_from_string(parts[4]);
  try {
    suci.nonce = octets_from_hex<16>(parts[5]);
    suci.ciphertext = from_hex(parts[6]);
    suci.tag = octets_from_hex<16>(parts[7]);
  } catch (const Error& e) {
    throw Error(Errc::InvalidIdentity, std::string("malformed SUCI fields: ") + e.what());
  }
  return suci;
}

ServingNetworkContext derive_snn(std::string_view mcc, std::string_view mnc) {
  const std::string m3 = pad3(mnc);
  const std::string c3 = pad3(mcc);
  return {"5G:mnc" + m3 + ".mcc" + c3 + ".3gppnetwork.org", "mnc" + m3 + ".mcc" + c3};
}

}  // namespace akaprime
