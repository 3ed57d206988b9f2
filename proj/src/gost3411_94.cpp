// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

// GOST R 34.11-94. 256-bit values are held as four 64-bit words in
// little-endian order: word 0 holds bytes 0..7 of the byte representation,
// and byte 0 is the least significant byte of the whole value.

#include <cstring>

#include "wpass/hash.hpp"

namespace wpass {

const GostParamSet& GostParamSet::test() {
  static const GostParamSet params{
      GostSbox::TestParamSet,
      {{{4, 10, 9, 2, 13, 8, 0, 14, 6, 11, 1, 12, 7, 15, 5, 3},
        {14, 11, 4, 12, 6, 13, 15, 10, 2, 3, 8, 1, 0, 7, 5, 9},
        {5, 8, 1, 13, 10, 3, 4, 2, 14, 15, 12, 7, 6, 0, 9, 11},
        {7, 13, 10, 1, 0, 8, 9, 15, 14, 4, 6, 12, 11, 2, 5, 3},
        {6, 12, 7, 1, 5, 15, 13, 8, 4, 10, 9, 14, 0, 3, 11, 2},
        {4, 11, 10, 0, 7, 2, 1, 13, 3, 6, 8, 5, 9, 12, 15, 14},
        {13, 11, 4, 1, 3, 15, 5, 9, 0, 10, 14, 7, 6, 8, 2, 12},
        {1, 15, 13, 0, 5, 7, 10, 4, 9, 2, 3, 14, 6, 11, 8, 12}}}};
  return params;
}

const GostParamSet& GostParamSet::cryptopro() {
  static const GostParamSet params{
      GostSbox::CryptoProParamSet,
      {{{10, 4, 5, 6, 8, 1, 3, 7, 13, 12, 14, 0, 9, 2, 11, 15},
        {5, 15, 4, 0, 2, 13, 11, 9, 1, 7, 6, 3, 12, 14, 10, 8},
        {7, 15, 12, 14, 9, 4, 1, 0, 3, 11, 5, 2, 6, 10, 8, 13},
        {4, 10, 7, 12, 0, 15, 2, 8, 14, 1, 6, 5, 13, 11, 9, 3},
        {7, 6, 4, 11, 9, 12, 2, 10, 1, 8, 0, 14, 15, 13, 3, 5},
        {7, 6, 2, 4, 13, 9, 15, 0, 10, 1, 5, 11, 8, 14, 12, 3},
        {13, 14, 4, 1, 7, 0, 5, 10, 3, 12, 8, 15, 6, 2, 9, 11},
        {1, 3, 10, 9, 5, 11, 4, 15, 8, 6, 7, 14, 13, 0, 2, 12}}}};
  return params;
}

const GostParamSet& GostParamSet::get(GostSbox id) {
  return id == GostSbox::TestParamSet ? test() : cryptopro();
}

namespace {

using Block = std::array<std::uint64_t, 4>;

Block load_block(const std::uint8_t* in) {
  Block out{};
  for (int w = 0; w < 4; ++w) {
    for (int b = 7; b >= 0; --b) {
      out[w] = out[w] << 8 | in[8 * w + b];
    }
  }
  return out;
}

std::uint8_t block_byte(const Block& x, int i) {
  return static_cast<std::uint8_t>(x[i / 8] >> (8 * (i % 8)));
}

// GOST 28147-89 in simple-substitution mode, with the S-box layer expanded
// into four byte-indexed tables that already include the 11-bit rotation.
class Cipher {
 public:
  explicit Cipher(const GostParamSet& params) {
    const auto& t = params.table;
    for (std::uint32_t x = 0; x < 256; ++x) {
      for (int pair = 0; pair < 4; ++pair) {
        const std::uint32_t lo = t[2 * pair][x & 0x0f];
        const std::uint32_t hi = t[2 * pair + 1][x >> 4];
        const std::uint32_t v = (hi << 4 | lo) << (8 * pair);
        sub_[pair][x] = v << 11 | v >> 21;
      }
    }
  }

  std::uint64_t encrypt(const std::array<std::uint32_t, 8>& key, std::uint64_t block) const {
    std::uint32_t a = static_cast<std::uint32_t>(block);
    std::uint32_t b = static_cast<std::uint32_t>(block >> 32);
    for (int round = 0; round < 3; ++round) {
      for (int k = 0; k < 8; k += 2) {
        b ^= f(a + key[k]);
        a ^= f(b + key[k + 1]);
      }
    }
    for (int k = 7; k > 0; k -= 2) {
      b ^= f(a + key[k]);
      a ^= f(b + key[k - 1]);
    }
    return std::uint64_t(a) << 32 | b;
  }

 private:
  std::uint32_t f(std::uint32_t x) const {
    return sub_[0][x & 0xff] ^ sub_[1][x >> 8 & 0xff] ^ sub_[2][x >> 16 & 0xff] ^
           sub_[3][x >> 24];
  }

  std::array<std::array<std::uint32_t, 256>, 4> sub_{};
};

// A(x) = (x1 ^ x2) || x4 || x3 || x2 where x1 is the low word.
Block transform_a(const Block& x) { return {x[1], x[2], x[3], x[0] ^ x[1]}; }

// The P permutation: key byte 4*l + k comes from input byte 8*k + l.
std::array<std::uint32_t, 8> transform_p(const Block& w) {
  std::array<std::uint32_t, 8> key{};
  for (int l = 0; l < 8; ++l) {
    key[l] = std::uint32_t(block_byte(w, l)) | std::uint32_t(block_byte(w, 8 + l)) << 8 |
             std::uint32_t(block_byte(w, 16 + l)) << 16 | std::uint32_t(block_byte(w, 24 + l)) << 24;
  }
  return key;
}

constexpr Block kC3 = {0xff00ff00ff00ff00ULL, 0x00ff00ff00ff00ffULL, 0xff0000ff00ffff00ULL,
                       0xff00ffff000000ffULL};

// psi: shift the sixteen 16-bit words down by one and feed back
// w0 ^ w1 ^ w2 ^ w3 ^ w12 ^ w15 into the top word.
void psi(std::array<std::uint16_t, 16>& s, int times) {
  for (int t = 0; t < times; ++t) {
    const std::uint16_t fb = s[0] ^ s[1] ^ s[2] ^ s[3] ^ s[12] ^ s[15];
    std::memmove(s.data(), s.data() + 1, 15 * sizeof(std::uint16_t));
    s[15] = fb;
  }
}

std::array<std::uint16_t, 16> to_words16(const Block& x) {
  std::array<std::uint16_t, 16> out{};
  for (int i = 0; i < 16; ++i) out[i] = static_cast<std::uint16_t>(x[i / 4] >> (16 * (i % 4)));
  return out;
}

Block from_words16(const std::array<std::uint16_t, 16>& s) {
  Block out{};
  for (int i = 0; i < 16; ++i) out[i / 4] |= std::uint64_t(s[i]) << (16 * (i % 4));
  return out;
}

void xor_into(std::array<std::uint16_t, 16>& s, const Block& x) {
  const auto w = to_words16(x);
  for (int i = 0; i < 16; ++i) s[i] ^= w[i];
}

Block step(const Cipher& cipher, const Block& h, const Block& m) {
  Block u = h;
  Block v = m;
  Block s{};
  for (int i = 0; i < 4; ++i) {
    const Block w = {u[0] ^ v[0], u[1] ^ v[1], u[2] ^ v[2], u[3] ^ v[3]};
    s[i] = cipher.encrypt(transform_p(w), h[i]);
    if (i == 3) break;
    u = transform_a(u);
    if (i == 1) {
      for (int k = 0; k < 4; ++k) u[k] ^= kC3[k];
    }
    v = transform_a(transform_a(v));
  }

  auto words = to_words16(s);
  psi(words, 12);
  xor_into(words, m);
  psi(words, 1);
  xor_into(words, h);
  psi(words, 61);
  return from_words16(words);
}

// 256-bit little-endian addition modulo 2^256.
void add_mod256(Block& acc, const Block& x) {
  unsigned carry = 0;
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t sum = acc[i] + x[i];
    const unsigned c1 = sum < acc[i];
    const std::uint64_t total = sum + carry;
    const unsigned c2 = total < sum;
    acc[i] = total;
    carry = c1 | c2;
  }
}

}  // namespace

Digest32 gost3411_94(ByteView message, const GostParamSet& params) {
  const Cipher cipher(params);
  Block hash{};
  Block checksum{};

  const std::size_t full = message.size() / 32;
  for (std::size_t i = 0; i < full; ++i) {
    const Block m = load_block(message.data() + 32 * i);
    hash = step(cipher, hash, m);
    add_mod256(checksum, m);
  }
  const std::size_t rest = message.size() % 32;
  if (rest != 0) {
    std::array<std::uint8_t, 32> padded{};
    std::memcpy(padded.data(), message.data() + 32 * full, rest);
    const Block m = load_block(padded.data());
    hash = step(cipher, hash, m);
    add_mod256(checksum, m);
  }

  const std::uint64_t bytes = message.size();
  const Block length = {bytes << 3, bytes >> 61, 0, 0};
  hash = step(cipher, hash, length);
  hash = step(cipher, hash, checksum);

  Digest32 out;
  for (int i = 0; i < 32; ++i) out[i] = block_byte(hash, i);
  return out;
}

}  // namespace wpass
