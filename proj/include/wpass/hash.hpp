// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "wpass/bytes.hpp"

namespace wpass {

enum class Side { US, RU };

std::string_view side_name(Side side);
Side parse_side(std::string_view name);

/// S-box parameter sets for the GOST 28147-89 cipher inside GOST R 34.11-94.
enum class GostSbox { TestParamSet, CryptoProParamSet };

struct GostParamSet {
  GostSbox id;
  /// table[row][nibble]; row r substitutes nibble r of the 32-bit word.
  std::array<std::array<std::uint8_t, 16>, 8> table;

  static const GostParamSet& test();
  static const GostParamSet& cryptopro();
  static const GostParamSet& get(GostSbox id);
};

Digest32 sha256(ByteView message);

Digest32 gost3411_94(ByteView message, const GostParamSet& params);

/// HMAC-SHA256, used by the transparent proof backend for attestations.
Digest32 hmac_sha256(ByteView key, ByteView message);

/// Concatenation combiner: sha256(m) || gost3411_94(m). The GOST half uses
/// the CryptoPro S-box unless a parameter set is given.
Digest64 combined_hash(ByteView message);
Digest64 combined_hash(ByteView message, const GostParamSet& params);

/// Long-term secret PRF key. Deliberately has no serialization helpers.
struct PrfKey {
  std::array<std::uint8_t, 32> key{};
  Side owner = Side::US;
};

/// Per-cell hiding randomness:
///   combined_hash(key || be64(update_index) || be32(field_index)).
Digest64 prf_sigma(const PrfKey& key, std::uint64_t update_index,
                   std::uint32_t field_index);

}  // namespace wpass
