#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "akaprime/bytes.hpp"

namespace akaprime {

using Rand = Octets<16>;
using Res = Octets<8>;
using Sqn = std::uint64_t;

inline constexpr Sqn kSqnLimit = Sqn{1} << 48;
inline constexpr std::size_t kPrfMaxOutput = 255 * 32;
inline constexpr std::size_t kMasterKeyLength = 208;

struct RootCredential {
  Octets<16> k{};
  Sqn sqn = 0;  // < 2^48
  Octets<2> amf_field{};
};

struct UsimOutput {
  Octets<8> mac_a{};
  Res xres{};
  Octets<16> ck{};
  Octets<16> ik{};
  Octets<6> ak{};
};

struct Autn {
  Octets<6> sqn_xor_ak{};
  Octets<2> amf_field{};
  Octets<8> mac_a{};

  Octets<16> encode() const;
  static Autn decode(ByteView raw);

  friend bool operator==(const Autn&, const Autn&) = default;
};

struct AuthenticationVector {
  Rand rand{};
  Autn autn;
  Res xres{};
  Octets<16> ck_prime{};
  Octets<16> ik_prime{};

  friend bool operator==(const AuthenticationVector&, const AuthenticationVector&) = default;
};

/// EAP-AKA' key hierarchy. mk is partitioned as k_encr ‖ k_aut ‖ k_re ‖ msk ‖ emsk.
struct KeyMaterial {
  Octets<kMasterKeyLength> mk{};
  Octets<16> k_encr{};
  Octets<32> k_aut{};
  Octets<32> k_re{};
  Octets<64> msk{};
  Octets<64> emsk{};
  Octets<32> k_ausf{};
  std::optional<Octets<32>> k_seaf;
  Octets<33> session_id{};

  friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;
};

/// Challenge functions keyed by the subscriber root key. HMAC-SHA-256 with one
/// domain byte per output (0x01 mac_a, 0x02 xres, 0x03 ck, 0x04 ik, 0x05 ak).
UsimOutput usim_functions(const RootCredential& cred, const Rand& rand);

Autn build_autn(Sqn sqn, const Octets<6>& ak, const Octets<2>& amf_field, const Octets<8>& mac_a);
Sqn recover_sqn(const Autn& autn, const Octets<6>& ak);

/// UE-side check of an AUTN: recovers the SQN and recomputes MAC-A.
struct AutnCheck {
  bool mac_ok = false;
  Sqn sqn = 0;
  UsimOutput usim;
};
AutnCheck check_autn(const Octets<16>& k, const Rand& rand, const Autn& autn);

struct CkIkPrime {
  Octets<16> ck_prime{};
  Octets<16> ik_prime{};
};

/// Binds CK/IK to the serving network: HMAC-SHA-256(ck ‖ ik, 0x20 ‖ snn ‖ sqn⊕ak).
CkIkPrime derive_ck_ik_prime(const Octets<16>& ck, const Octets<16>& ik, std::string_view snn,
                             const Octets<6>& sqn_xor_ak);

/// Counter-mode HMAC-SHA-256 expansion:
///   T1 = HMAC(key, label ‖ 0x01), Ti = HMAC(key, T(i-1) ‖ label ‖ i)
/// Throws PrfLengthExceeded when out_len > 8160.
Bytes prf_prime(ByteView key, ByteView label, std::size_t out_len);

/// `identity` is the exact identifier the UE transmitted. k_seaf is left unset.
KeyMaterial derive_master_keys(const Octets<16>& ck_prime, const Octets<16>& ik_prime,
                               std::string_view identity, const Rand& rand, const Autn& autn);

Octets<32> derive_k_seaf(const Octets<32>& k_ausf, std::string_view snn);

/// Anchor key for the non-EAP 5G-AKA flow: HMAC-SHA-256(ck ‖ ik, 0x6A ‖ snn ‖ sqn⊕ak).
Octets<32> derive_k_ausf_5g_aka(const Octets<16>& ck, const Octets<16>& ik, std::string_view snn,
                                const Octets<6>& sqn_xor_ak);

/// HXRES / HRES: first 16 bytes of SHA-256(rand ‖ response).
Octets<16> hashed_response(const Rand& rand, const Res& res_or_xres);

/// RAND for a given (seed, sqn): first 16 bytes of HMAC-SHA-256(seed, "akaprime-rand" ‖ be48(sqn)).
Rand draw_rand(ByteView rng_seed, Sqn sqn);

struct GeneratedAv {
  AuthenticationVector av;
  Sqn next_sqn = 0;
};

/// Home-side AV generation. The caller persists `next_sqn`.
GeneratedAv generate_av(const RootCredential& cred, std::string_view snn, ByteView rng_seed);

/// First four bytes as hex, used in reports.
std::string fingerprint(ByteView data);

}  // namespace akaprime
