// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "wpass/hash.hpp"

namespace wpass {

struct PassportRow;
struct CountryProfile;

/// Leaves per update tree: eleven passport fields plus five padding cells.
inline constexpr std::uint32_t kTreeSize = 16;

struct LeafVector {
  std::vector<Digest64> leaves;
  std::uint64_t update_index = 0;
};

struct Commitment {
  Digest64 root;
  std::uint64_t update_index = 0;
  /// Assigned by the protocol layer when the commitment is exchanged; 0 until then.
  std::uint64_t commitment_id = 0;

  bool operator==(const Commitment&) const = default;
};

// Tree nodes use 1-based array positions: leaves are 1..n, the parent of the
// pair (2i-1, 2i) is n+i, and the root sits at 2n-1.
struct ProofNode {
  std::uint32_t position = 0;
  Digest64 hash;

  bool operator==(const ProofNode&) const = default;
};

/// Aggregated multi-leaf inclusion proof, entries sorted by position.
struct InclusionProof {
  std::vector<ProofNode> entries;
  std::uint32_t tree_size = 0;

  bool operator==(const InclusionProof&) const = default;
};

/// A disclosed cell: its encoded value plus the randomness that hid it.
struct CellOpening {
  std::uint32_t field_index = 0;
  Bytes value;
  Digest64 sigma;

  bool operator==(const CellOpening&) const = default;
};

std::uint32_t merkle_parent(std::uint32_t position, std::uint32_t tree_size);
std::uint32_t merkle_sibling(std::uint32_t position);

/// H(sigma || value).
Digest64 hide_with_sigma(const Digest64& sigma, ByteView value);

/// hide(i, j, x) = H(PRF_k(i, j) || x).
Digest64 hide(const PrfKey& key, std::uint64_t update_index, std::uint32_t field_index,
              ByteView value);

/// Array-based Merkle root: y[n+i] = H(y[2i-1] || y[2i]) for i = 1..n-1,
/// returning y[2n-1]. Throws NonPowerOfTwo.
Digest64 merkle_root(std::span<const Digest64> leaves);
inline Digest64 merkle_root(const LeafVector& leaves) { return merkle_root(leaves.leaves); }

/// Hides encoded fields at positions 1..fields.size() and pads with hidden
/// empty cells up to kTreeSize leaves.
LeafVector hide_fields(const PrfKey& key, std::uint64_t update_index, std::span<const Bytes> fields);

Commitment commit(const PrfKey& key, std::uint64_t update_index, const PassportRow& row,
                  const CountryProfile& profile);

CellOpening open_cell(const PrfKey& key, std::uint64_t update_index, std::uint32_t field_index,
                      ByteView value);

/// Minimal set of nodes needed to rebuild the root from the leaves at
/// `indices` (1-based). Throws IndexOutOfRange.
InclusionProof prove_inclusion(const std::set<std::uint32_t>& indices, const LeafVector& leaves);

/// Recomputes each opened leaf as H(sigma || value) and rebuilds the root
/// with the proof entries. Every entry must be consumed. Throws
/// MalformedProof for positions that cannot belong to the tree.
bool verify_inclusion(const InclusionProof& proof, std::span<const CellOpening> openings,
                      const Digest64& root, std::uint64_t update_index);

}  // namespace wpass
