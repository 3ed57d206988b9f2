// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wpass/error.hpp"

namespace wpass {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);

/// Decodes lowercase or uppercase hex. Throws Error(BadHex).
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view text) {
  return Bytes(text.begin(), text.end());
}

inline std::string to_string(ByteView bytes) {
  return std::string(bytes.begin(), bytes.end());
}

inline void append(Bytes& out, ByteView more) {
  out.insert(out.end(), more.begin(), more.end());
}

void append_be64(Bytes& out, std::uint64_t v);
void append_be32(Bytes& out, std::uint32_t v);
std::uint64_t load_be64(ByteView in);

/// Fixed-size byte string; the strong type behind digests and keys.
template <std::size_t N>
struct FixedBytes {
  std::array<std::uint8_t, N> bytes{};

  static constexpr std::size_t size() { return N; }
  const std::uint8_t* data() const { return bytes.data(); }
  std::uint8_t* data() { return bytes.data(); }
  auto begin() const { return bytes.begin(); }
  auto end() const { return bytes.end(); }
  std::uint8_t& operator[](std::size_t i) { return bytes[i]; }
  std::uint8_t operator[](std::size_t i) const { return bytes[i]; }

  operator ByteView() const { return ByteView(bytes.data(), N); }
  Bytes to_vector() const { return Bytes(bytes.begin(), bytes.end()); }
  std::string hex() const { return to_hex(*this); }

  static FixedBytes from(ByteView in);
  static FixedBytes from_hex(std::string_view hex);

  auto operator<=>(const FixedBytes&) const = default;
};

template <std::size_t N>
FixedBytes<N> FixedBytes<N>::from(ByteView in) {
  if (in.size() != N) {
    throw Error(Errc::BadHex, "expected " + std::to_string(N) + " bytes, got " +
                                  std::to_string(in.size()));
  }
  FixedBytes out;
  std::copy(in.begin(), in.end(), out.bytes.begin());
  return out;
}

template <std::size_t N>
FixedBytes<N> FixedBytes<N>::from_hex(std::string_view hex) {
  return from(wpass::from_hex(hex));
}

using Digest32 = FixedBytes<32>;
using Digest64 = FixedBytes<64>;

}  // namespace wpass
