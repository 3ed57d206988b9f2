// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include <string>

#include "wpass/hash.hpp"

namespace wpass {

std::string_view side_name(Side side) { return side == Side::US ? "US" : "RU"; }

Side parse_side(std::string_view name) {
  if (name == "US") return Side::US;
  if (name == "RU") return Side::RU;
  throw Error(Errc::SchemaError, "unknown side '" + std::string(name) + "'");
}

Digest64 combined_hash(ByteView message) {
  return combined_hash(message, GostParamSet::cryptopro());
}

Digest64 combined_hash(ByteView message, const GostParamSet& params) {
  const Digest32 us = sha256(message);
  const Digest32 ru = gost3411_94(message, params);
  Digest64 out;
  std::copy(us.begin(), us.end(), out.bytes.begin());
  std::copy(ru.begin(), ru.end(), out.bytes.begin() + 32);
  return out;
}

Digest64 prf_sigma(const PrfKey& key, std::uint64_t update_index, std::uint32_t field_index) {
  Bytes input(key.key.begin(), key.key.end());
  append_be64(input, update_index);
  append_be32(input, field_index);
  return combined_hash(input);
}

}  // namespace wpass
