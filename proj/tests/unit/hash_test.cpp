#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <set>

#include "doctest.h"
#include "test_support.hpp"
#include "wpass/hash.hpp"

using namespace wpass;
using wpass::testing::load_vectors;
using wpass::testing::random_bytes;

namespace {

Digest32 openssl_sha256(ByteView m) {
  Digest32 out;
  unsigned int len = 0;
  EVP_Digest(m.data(), m.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

Bytes repeat(char c, std::size_t n) { return Bytes(n, static_cast<std::uint8_t>(c)); }

}  // namespace

TEST_SUITE("sha256") {
  TEST_CASE("FIPS 180-4 vectors") {
    CHECK(sha256(Bytes{}).hex() == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256(to_bytes("abc")).hex() ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256(to_bytes("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")).hex() ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    CHECK(sha256(repeat('a', 1000000)).hex() ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
  }

  TEST_CASE("fixture vectors") {
    const auto vectors = load_vectors(wpass::testing::fixture("vectors/sha256.txt"));
    REQUIRE(vectors.size() > 80);
    for (const auto& v : vectors) {
      CHECK(sha256(v.input).hex() == v.digest_hex);
    }
  }

  TEST_CASE("agrees with OpenSSL over every length up to three blocks") {
    std::mt19937_64 rng(42);
    for (std::size_t n = 0; n < 200; ++n) {
      const Bytes m = random_bytes(rng, n);
      REQUIRE(sha256(m) == openssl_sha256(m));
    }
  }

  TEST_CASE("HMAC-SHA256") {
    // RFC 4231 test case 1.
    const Bytes key(20, 0x0b);
    CHECK(hmac_sha256(key, to_bytes("Hi There")).hex() ==
          "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");

    std::mt19937_64 rng(7);
    for (std::size_t klen : {0u, 16u, 32u, 64u, 65u, 131u}) {
      const Bytes k = random_bytes(rng, klen);
      const Bytes m = random_bytes(rng, 77);
      Digest32 expected;
      unsigned int len = 0;
      HMAC(EVP_sha256(), k.data(), static_cast<int>(k.size()), m.data(), m.size(), expected.data(), &len);
      CHECK(hmac_sha256(k, m) == expected);
    }
  }
}

TEST_SUITE("gost3411_94") {
  TEST_CASE("S-box rows are permutations") {
    for (const auto* params : {&GostParamSet::test(), &GostParamSet::cryptopro()}) {
      for (const auto& row : params->table) {
        std::set<int> seen(row.begin(), row.end());
        CHECK(seen.size() == 16);
        CHECK(*seen.rbegin() == 15);
      }
    }
  }

  TEST_CASE("published vectors, test parameter set") {
    const auto& p = GostParamSet::test();
    CHECK(gost3411_94(Bytes{}, p).hex() == "ce85b99cc46752fffee35cab9a7b0278abb4c2d2055cff685af4912c49490f8d");
    CHECK(gost3411_94(to_bytes("This is message, length=32 bytes"), p).hex() ==
          "b1c466d37519b82e8319819ff32595e047a28cb6f83eff1c6916a815a637fffa");
    CHECK(gost3411_94(to_bytes("Suppose the original message has length = 50 bytes"), p).hex() ==
          "471aba57a60a770d3a76130635c1fbea4ef14de51f78b4ae57dd893b62f55208");
  }

  TEST_CASE("published vectors, CryptoPro parameter set") {
    const auto& p = GostParamSet::cryptopro();
    CHECK(gost3411_94(Bytes{}, p).hex() == "981e5f3ca30c841487830f84fb433e13ac1101569b9c13584ac483234cd656c0");
    CHECK(gost3411_94(to_bytes("This is message, length=32 bytes"), p).hex() ==
          "2cefc2f7b7bdc514e18ea57fa74ff357e7fa17d652c75f69cb1be7893ede48eb");
    CHECK(gost3411_94(to_bytes("Suppose the original message has length = 50 bytes"), p).hex() ==
          "c3730c5cbccacf915ac292676f21e8bd4ef75331d9405e5f1a61dc3130a65011");
  }

  TEST_CASE("fixture vectors for both parameter sets") {
    for (const auto& [file, params] :
         {std::pair{"vectors/gost94_test.txt", &GostParamSet::test()},
          std::pair{"vectors/gost94_cryptopro.txt", &GostParamSet::cryptopro()}}) {
      const auto vectors = load_vectors(wpass::testing::fixture(file));
      REQUIRE(vectors.size() > 80);
      for (const auto& v : vectors) {
        INFO(file << " input length " << v.input.size());
        CHECK(gost3411_94(v.input, *params).hex() == v.digest_hex);
      }
    }
  }

  TEST_CASE("one million bytes") {
    const Bytes m = repeat('a', 1000000);
    CHECK(gost3411_94(m, GostParamSet::test()).hex() ==
          "5c00ccc2734cdd3332d3d4749576e3c1a7dbaf0e7ea74e9fa602413c90a129fa");
    CHECK(gost3411_94(m, GostParamSet::cryptopro()).hex() ==
          "8693287aa62f9478f7cb312ec0866b6c4e4a0f11160441e8f4ffcd2715dd554f");
  }
}

TEST_SUITE("combined_hash") {
  TEST_CASE("empty input is the two empty digests concatenated") {
    CHECK(combined_hash(Bytes{}).hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
          "981e5f3ca30c841487830f84fb433e13ac1101569b9c13584ac483234cd656c0");
    CHECK(combined_hash(Bytes{}, GostParamSet::test()).hex().substr(64) ==
          "ce85b99cc46752fffee35cab9a7b0278abb4c2d2055cff685af4912c49490f8d");
  }

  TEST_CASE("halves are the component hashes") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
      const Bytes m = random_bytes(rng, rng() % 300);
      const Digest64 h = combined_hash(m);
      CHECK(Digest32::from(ByteView(h).first(32)) == sha256(m));
      CHECK(Digest32::from(ByteView(h).last(32)) == gost3411_94(m, GostParamSet::cryptopro()));
    }
  }

  TEST_CASE("single bit flips change both halves") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
      Bytes m = random_bytes(rng, 1 + rng() % 128);
      const Digest64 before = combined_hash(m);
      m[rng() % m.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
      const Digest64 after = combined_hash(m);
      CHECK(!std::equal(before.begin(), before.begin() + 32, after.begin()));
      CHECK(!std::equal(before.begin() + 32, before.end(), after.begin() + 32));
    }
  }
}

TEST_SUITE("prf_sigma") {
  PrfKey fixed_key() {
    PrfKey k;
    for (std::size_t i = 0; i < k.key.size(); ++i) k.key[i] = static_cast<std::uint8_t>(i * 7 + 1);
    return k;
  }

  TEST_CASE("deterministic and keyed") {
    const PrfKey k = fixed_key();
    CHECK(prf_sigma(k, 1, 1) == prf_sigma(k, 1, 1));
    CHECK(prf_sigma(k, 1, 1) != prf_sigma(k, 1, 2));
    PrfKey other = k;
    other.key[0] ^= 1;
    CHECK(prf_sigma(k, 1, 1) != prf_sigma(other, 1, 1));
    CHECK(prf_sigma(k, 1, 1).size() == 64);
  }

  TEST_CASE("matches the keyed-hash construction") {
    const PrfKey k = fixed_key();
    Bytes input(k.key.begin(), k.key.end());
    append(input, from_hex("0000000000000003" "00000005"));
    CHECK(prf_sigma(k, 3, 5) == combined_hash(input));
  }

  TEST_CASE("no collisions across 100000 distinct index pairs") {
    const PrfKey k = fixed_key();
    std::set<Digest64> seen;
    for (std::uint64_t i = 1; i <= 6250; ++i) {
      for (std::uint32_t j = 1; j <= 16; ++j) seen.insert(prf_sigma(k, i, j));
    }
    CHECK(seen.size() == 100000);
  }
}
