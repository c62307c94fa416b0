#include "akaprime/crypto.hpp"

#include "akaprime/digest.hpp"
#include "akaprime/error.hpp"

namespace akaprime {

namespace {

Digest keyed(const Octets<16>& k, Byte domain, ByteView tail) {
  return hmac_sha256(k, concat({ByteView(&domain, 1), tail}));
}

Octets<6> sqn_bytes(Sqn sqn) { return take<6>(be_encode(sqn, 6)); }

template <std::size_t N, std::size_t M>
Octets<N> slice(const Octets<M>& src, std::size_t offset) {
  static_assert(N <= M);
  return take<N>(ByteView(src).subspan(offset, N));
}

}  // namespace

Octets<16> Autn::encode() const {
  return take<16>(concat({sqn_xor_ak, amf_field, mac_a}));
}

Autn Autn::decode(ByteView raw) {
  if (raw.size() != 16) throw Error(Errc::InvalidLength, "AUTN must be 16 bytes");
  Autn autn;
  autn.sqn_xor_ak = take<6>(raw.subspan(0, 6));
  autn.amf_field = take<2>(raw.subspan(6, 2));
  autn.mac_a = take<8>(raw.subspan(8, 8));
  return autn;
}

UsimOutput usim_functions(const RootCredential& cred, const Rand& rand) {
  UsimOutput out;
  const auto sqn = sqn_bytes(cred.sqn);
  out.mac_a = take<8>(keyed(cred.k, 0x01, concat({rand, sqn, cred.amf_field})));
  out.xres = take<8>(keyed(cred.k, 0x02, rand));
  out.ck = take<16>(keyed(cred.k, 0x03, rand));
  out.ik = take<16>(keyed(cred.k, 0x04, rand));
  out.ak = take<6>(keyed(cred.k, 0x05, rand));
  return out;
}

Autn build_autn(Sqn sqn, const Octets<6>& ak, const Octets<2>& amf_field, const Octets<8>& mac_a) {
  Autn autn;
  const auto s = sqn_bytes(sqn);
  for (std::size_t i = 0; i < 6; ++i) autn.sqn_xor_ak[i] = s[i] ^ ak[i];
  autn.amf_field = amf_field;
  autn.mac_a = mac_a;
  return autn;
}

Sqn recover_sqn(const Autn& autn, const Octets<6>& ak) {
  Octets<6> s{};
  for (std::size_t i = 0; i < 6; ++i) s[i] = autn.sqn_xor_ak[i] ^ ak[i];
  return be_decode(s);
}

AutnCheck check_autn(const Octets<16>& k, const Rand& rand, const Autn& autn) {
  AutnCheck check;
  // AK depends on k and rand only, so a provisional credential yields it.
  const auto ak = usim_functions(RootCredential{k, 0, autn.amf_field}, rand).ak;
  check.sqn = recover_sqn(autn, ak);
  check.usim = usim_functions(RootCredential{k, check.sqn, autn.amf_field}, rand);
  check.mac_ok = equal_ct(check.usim.mac_a, autn.mac_a);
  return check;
}

CkIkPrime derive_ck_ik_prime(const Octets<16>& ck, const Octets<16>& ik, std::string_view snn,
                             const Octets<6>& sqn_xor_ak) {
  static constexpr Byte kFc = 0x20;
  const Bytes key = concat({ck, ik});
  const Digest out = hmac_sha256(key, concat({ByteView(&kFc, 1), as_bytes(snn), sqn_xor_ak}));
  return {slice<16>(out, 0), slice<16>(out, 16)};
}

Bytes prf_prime(ByteView key, ByteView label, std::size_t out_len) {
  if (out_len > kPrfMaxOutput) {
    throw Error(Errc::PrfLengthExceeded, "requested " + std::to_string(out_len) + " bytes, max 8160");
  }
  Bytes out;
  out.reserve(out_len + 32);
  Bytes block;
  for (unsigned i = 1; out.size() < out_len; ++i) {
    const Byte counter = static_cast<Byte>(i);
    const Digest d = hmac_sha256(key, concat({block, label, ByteView(&counter, 1)}));
    block.assign(d.begin(), d.end());
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(out_len);
  return out;
}

KeyMaterial derive_master_keys(const Octets<16>& ck_prime, const Octets<16>& ik_prime,
                               std::string_view identity, const Rand& rand, const Autn& autn) {
  const Bytes key = concat({ik_prime, ck_prime});
  const Bytes label = concat({as_bytes("EAP-AKA'"), as_bytes(identity)});
  const Bytes mk = prf_prime(key, label, kMasterKeyLength);

  KeyMaterial km;
  km.mk = take<kMasterKeyLength>(mk);
  km.k_encr = slice<16>(km.mk, 0);
  km.k_aut = slice<32>(km.mk, 16);
  km.k_re = slice<32>(km.mk, 48);
  km.msk = slice<64>(km.mk, 80);
  km.emsk = slice<64>(km.mk, 144);
  km.k_ausf = slice<32>(km.emsk, 0);

  static constexpr Byte kEapAkaPrimeType = 0x32;
  km.session_id = take<33>(concat({ByteView(&kEapAkaPrimeType, 1), rand, autn.encode()}));
  return km;
}

Octets<32> derive_k_seaf(const Octets<32>& k_ausf, std::string_view snn) {
  static constexpr Byte kFc = 0x6C;
  return hmac_sha256(k_ausf, concat({ByteView(&kFc, 1), as_bytes(snn)}));
}

Octets<32> derive_k_ausf_5g_aka(const Octets<16>& ck, const Octets<16>& ik, std::string_view snn,
                                const Octets<6>& sqn_xor_ak) {
  static constexpr Byte kFc = 0x6A;
  const Bytes key = concat({ck, ik});
  return hmac_sha256(key, concat({ByteView(&kFc, 1), as_bytes(snn), sqn_xor_ak}));
}

Octets<16> hashed_response(const Rand& rand, const Res& res_or_xres) {
  return take<16>(sha256(concat({rand, res_or_xres})));
}

Rand draw_rand(ByteView rng_seed, Sqn sqn) {
  return take<16>(hmac_sha256(rng_seed, concat({as_bytes("akaprime-rand"), sqn_bytes(sqn)})));
}

GeneratedAv generate_av(const RootCredential& cred, std::string_view snn, ByteView rng_seed) {
  if (cred.sqn >= kSqnLimit - 1) {
    throw Error(Errc::SqnOverflow, "sequence number space exhausted");
  }
  GeneratedAv out;
  AuthenticationVector& av = out.av;
  av.rand = draw_rand(rng_seed, cred.sqn);
  const UsimOutput usim = usim_functions(cred, av.rand);
  av.autn = build_autn(cred.sqn, usim.ak, cred.amf_field, usim.mac_a);
  av.xres = usim.xres;
  const CkIkPrime primes = derive_ck_ik_prime(usim.ck, usim.ik, snn, av.autn.sqn_xor_ak);
  av.ck_prime = primes.ck_prime;
  av.ik_prime = primes.ik_prime;
  out.next_sqn = cred.sqn + 1;
  return out;
}

std::string fingerprint(ByteView data) { return to_hex(data.first(std::min<std::size_t>(4, data.size()))); }

}  // namespace akaprime
