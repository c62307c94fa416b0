#include <random>

#include "check_errc.hpp"
#include "oracle_bridge.hpp"
#include "support.hpp"

#include "akaprime/crypto.hpp"
#include "akaprime/digest.hpp"

using namespace akaprime;
using akaprime::test::random_octets;

TEST_CASE("frozen oracle vectors") {
  const auto vectors = akaprime::test::oracle_vectors();
  REQUIRE(vectors.size() >= 10);
  for (const auto& v : vectors) {
    const std::string op = v["op"];
    INFO(op << " " << v["inputs"].dump());
    const auto got = akaprime::test::evaluate(op, v["inputs"]);
    for (const auto& [field, want] : v["outputs"].items()) {
      INFO(field);
      CHECK(got.at(field) == want);
    }
  }
}

TEST_CASE("primitive digests match published test vectors") {
  // FIPS 180-2 "abc" and RFC 4231 test case 2
  CHECK(to_hex(sha256(as_bytes("abc"))) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(hmac_sha256(as_bytes("Jefe"), as_bytes("what do ya want for nothing?"))) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST_CASE("AUTN layout and SQN recovery") {
  std::mt19937_64 rng(0xa07);
  for (int i = 0; i < 200; ++i) {
    const Sqn sqn = rng() % kSqnLimit;
    const auto ak = random_octets<6>(rng);
    const auto amf = random_octets<2>(rng);
    const auto mac = random_octets<8>(rng);
    const Autn autn = build_autn(sqn, ak, amf, mac);
    const auto raw = autn.encode();
    CHECK(Autn::decode(raw) == autn);
    CHECK(recover_sqn(autn, ak) == sqn);
    CHECK(std::equal(raw.begin() + 6, raw.begin() + 8, amf.begin()));
    CHECK(std::equal(raw.begin() + 8, raw.end(), mac.begin()));
  }
  CHECK_ERRC(Autn::decode(Bytes(15)), Errc::InvalidLength);
}

TEST_CASE("check_autn accepts honest tokens and rejects any bit flip") {
  std::mt19937_64 rng(0xc4e);
  const RootCredential cred{random_octets<16>(rng), 42, {0x80, 0x00}};
  const auto g = generate_av(cred, "5G:mnc001.mcc001.3gppnetwork.org", Bytes{1, 2, 3});
  const auto ok = check_autn(cred.k, g.av.rand, g.av.autn);
  CHECK(ok.mac_ok);
  CHECK(ok.sqn == 42);
  CHECK(ok.usim.xres == g.av.xres);
  for (std::size_t bit = 0; bit < 128; ++bit) {
    auto raw = g.av.autn.encode();
    raw[bit / 8] ^= static_cast<Byte>(1u << (bit % 8));
    CHECK_FALSE(check_autn(cred.k, g.av.rand, Autn::decode(raw)).mac_ok);
  }
}

TEST_CASE("prf_prime is a prefix-stable expansion with a hard cap") {
  const Bytes key(32, 0x0b);
  const Bytes label = to_bytes(as_bytes("EAP-AKA'"));
  const Bytes long_out = prf_prime(key, label, 1000);
  for (std::size_t n : {1u, 31u, 32u, 33u, 64u, 208u, 999u}) {
    const Bytes short_out = prf_prime(key, label, n);
    CHECK(std::equal(short_out.begin(), short_out.end(), long_out.begin()));
  }
  CHECK(prf_prime(key, label, kPrfMaxOutput).size() == 8160);
  CHECK(prf_prime(key, label, 0).empty());
  CHECK_ERRC(prf_prime(key, label, kPrfMaxOutput + 1), Errc::PrfLengthExceeded);
}

TEST_CASE("master key partition") {
  std::mt19937_64 rng(0x3a);
  const auto autn = Autn::decode(test::random_bytes(rng, 16));
  const auto rand = random_octets<16>(rng);
  const auto km = derive_master_keys(random_octets<16>(rng), random_octets<16>(rng), "6001010000000001@x", rand, autn);
  auto slice = [&](std::size_t off, std::size_t n) { return Bytes(km.mk.begin() + off, km.mk.begin() + off + n); };
  CHECK(slice(0, 16) == to_bytes(km.k_encr));
  CHECK(slice(16, 32) == to_bytes(km.k_aut));
  CHECK(slice(48, 32) == to_bytes(km.k_re));
  CHECK(slice(80, 64) == to_bytes(km.msk));
  CHECK(slice(144, 64) == to_bytes(km.emsk));
  CHECK(to_bytes(km.k_ausf) == Bytes(km.emsk.begin(), km.emsk.begin() + 32));
  CHECK(km.session_id[0] == 0x32);
  CHECK(Bytes(km.session_id.begin() + 1, km.session_id.begin() + 17) == to_bytes(rand));
  CHECK(!km.k_seaf);
}

TEST_CASE("key derivations bind their context") {
  std::mt19937_64 rng(0xb1d);
  const auto ck = random_octets<16>(rng);
  const auto ik = random_octets<16>(rng);
  const auto sqn_xor_ak = random_octets<6>(rng);
  const auto a = derive_ck_ik_prime(ck, ik, "5G:mnc001.mcc001.3gppnetwork.org", sqn_xor_ak);
  const auto b = derive_ck_ik_prime(ck, ik, "5G:mnc002.mcc001.3gppnetwork.org", sqn_xor_ak);
  CHECK(a.ck_prime != b.ck_prime);
  CHECK(a.ik_prime != b.ik_prime);

  const auto autn = Autn::decode(test::random_bytes(rng, 16));
  const auto rand = random_octets<16>(rng);
  const auto k1 = derive_master_keys(a.ck_prime, a.ik_prime, "6001010000000001@a", rand, autn);
  const auto k2 = derive_master_keys(a.ck_prime, a.ik_prime, "6001010000000002@a", rand, autn);
  CHECK(k1.k_ausf != k2.k_ausf);

  const auto seaf1 = derive_k_seaf(k1.k_ausf, "5G:mnc001.mcc001.3gppnetwork.org");
  const auto seaf2 = derive_k_seaf(k1.k_ausf, "5G:mnc002.mcc001.3gppnetwork.org");
  CHECK(seaf1 != seaf2);
}

TEST_CASE("hashed_response is the SHA-256 prefix of rand || res") {
  std::mt19937_64 rng(0x4e5);
  for (int i = 0; i < 20; ++i) {
    const auto rand = random_octets<16>(rng);
    const auto res = random_octets<8>(rng);
    const auto d = sha256(concat({rand, res}));
    CHECK(to_bytes(hashed_response(rand, res)) == Bytes(d.begin(), d.begin() + 16));
  }
}

TEST_CASE("generate_av is deterministic and advances SQN") {
  const RootCredential cred{octets_from_hex<16>("465b5ce8b199b49faa5f0a2ee238a6bc"), 7, {0x80, 0x00}};
  const std::string snn = "5G:mnc031.mcc724.3gppnetwork.org";
  const Bytes seed{0xde, 0xad};
  const auto a = generate_av(cred, snn, seed);
  const auto b = generate_av(cred, snn, seed);
  CHECK(a.av == b.av);
  CHECK(a.next_sqn == 8);
  CHECK(a.av.rand == draw_rand(seed, 7));

  RootCredential later = cred;
  later.sqn = a.next_sqn;
  CHECK(generate_av(later, snn, seed).av.rand != a.av.rand);

  RootCredential top = cred;
  top.sqn = kSqnLimit - 1;
  CHECK_ERRC(generate_av(top, snn, seed), Errc::SqnOverflow);
  top.sqn = kSqnLimit - 2;
  CHECK(generate_av(top, snn, seed).next_sqn == kSqnLimit - 1);
}

TEST_CASE("fingerprint is four bytes of hex") {
  CHECK(fingerprint(from_hex("0123456789")) == "01234567");
}
