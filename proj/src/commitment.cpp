// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/commitment.hpp"

#include <map>

#include "wpass/passport.hpp"

namespace wpass {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Digest64 hash_pair(const Digest64& left, const Digest64& right) {
  Bytes buf;
  buf.reserve(2 * Digest64::size());
  append(buf, left);
  append(buf, right);
  return combined_hash(buf);
}

// y[1..2n-1] with y[0] unused.
std::vector<Digest64> build_tree(std::span<const Digest64> leaves) {
  const std::size_t n = leaves.size();
  if (!is_power_of_two(n)) {
    throw Error(Errc::NonPowerOfTwo, "leaf count " + std::to_string(n));
  }
  std::vector<Digest64> y(2 * n);
  std::copy(leaves.begin(), leaves.end(), y.begin() + 1);
  for (std::size_t i = 1; i < n; ++i) y[i + n] = hash_pair(y[2 * i - 1], y[2 * i]);
  return y;
}

}  // namespace

std::uint32_t merkle_parent(std::uint32_t position, std::uint32_t tree_size) {
  return (position + 1) / 2 + tree_size;
}

std::uint32_t merkle_sibling(std::uint32_t position) {
  return position % 2 == 1 ? position + 1 : position - 1;
}

Digest64 hide_with_sigma(const Digest64& sigma, ByteView value) {
  Bytes buf;
  buf.reserve(Digest64::size() + value.size());
  append(buf, sigma);
  append(buf, value);
  return combined_hash(buf);
}

Digest64 hide(const PrfKey& key, std::uint64_t update_index, std::uint32_t field_index,
              ByteView value) {
  return hide_with_sigma(prf_sigma(key, update_index, field_index), value);
}

Digest64 merkle_root(std::span<const Digest64> leaves) {
  const auto y = build_tree(leaves);
  return y[2 * leaves.size() - 1];
}

LeafVector hide_fields(const PrfKey& key, std::uint64_t update_index, std::span<const Bytes> fields) {
  if (fields.size() > kTreeSize) {
    throw Error(Errc::IndexOutOfRange, std::to_string(fields.size()) + " fields exceed the tree");
  }
  LeafVector out;
  out.update_index = update_index;
  out.leaves.reserve(kTreeSize);
  for (std::uint32_t j = 1; j <= kTreeSize; ++j) {
    const ByteView value = j <= fields.size() ? ByteView(fields[j - 1]) : ByteView();
    out.leaves.push_back(hide(key, update_index, j, value));
  }
  return out;
}

Commitment commit(const PrfKey& key, std::uint64_t update_index, const PassportRow& row,
                  const CountryProfile& profile) {
  const auto fields = encode_row(row, profile);
  return Commitment{merkle_root(hide_fields(key, update_index, fields)), update_index, 0};
}

CellOpening open_cell(const PrfKey& key, std::uint64_t update_index, std::uint32_t field_index,
                      ByteView value) {
  return CellOpening{field_index, Bytes(value.begin(), value.end()),
                     prf_sigma(key, update_index, field_index)};
}

InclusionProof prove_inclusion(const std::set<std::uint32_t>& indices, const LeafVector& leaves) {
  const auto n = static_cast<std::uint32_t>(leaves.leaves.size());
  const auto y = build_tree(leaves.leaves);
  if (indices.empty()) throw Error(Errc::IndexOutOfRange, "empty index set");
  for (std::uint32_t j : indices) {
    if (j < 1 || j > n) {
      throw Error(Errc::IndexOutOfRange, "leaf " + std::to_string(j) + " outside 1.." + std::to_string(n));
    }
  }

  InclusionProof proof;
  proof.tree_size = n;
  std::set<std::uint32_t> level = indices;
  const std::uint32_t root = 2 * n - 1;
  while (!(level.size() == 1 && *level.begin() == root)) {
    std::set<std::uint32_t> next;
    for (std::uint32_t p : level) {
      const std::uint32_t s = merkle_sibling(p);
      if (!level.count(s)) proof.entries.push_back({s, y[s]});
      next.insert(merkle_parent(p, n));
    }
    level = std::move(next);
  }
  std::sort(proof.entries.begin(), proof.entries.end(),
            [](const ProofNode& a, const ProofNode& b) { return a.position < b.position; });
  return proof;
}

bool verify_inclusion(const InclusionProof& proof, std::span<const CellOpening> openings,
                      const Digest64& root, std::uint64_t update_index) {
  (void)update_index;  // sigma in each opening already binds the update index
  const std::uint32_t n = proof.tree_size;
  if (!is_power_of_two(n)) throw Error(Errc::MalformedProof, "tree size " + std::to_string(n));
  if (openings.empty()) throw Error(Errc::MalformedProof, "no openings");
  const std::uint32_t root_pos = 2 * n - 1;

  std::map<std::uint32_t, Digest64> known;
  for (const auto& o : openings) {
    if (o.field_index < 1 || o.field_index > n) {
      throw Error(Errc::MalformedProof, "opening for leaf " + std::to_string(o.field_index));
    }
    if (!known.emplace(o.field_index, hide_with_sigma(o.sigma, o.value)).second) {
      throw Error(Errc::MalformedProof, "duplicate opening for leaf " + std::to_string(o.field_index));
    }
  }
  std::map<std::uint32_t, Digest64> supplied;
  for (const auto& e : proof.entries) {
    if (e.position < 1 || e.position >= root_pos) {
      throw Error(Errc::MalformedProof, "node position " + std::to_string(e.position));
    }
    if (known.count(e.position) || !supplied.emplace(e.position, e.hash).second) {
      throw Error(Errc::MalformedProof, "node position " + std::to_string(e.position) + " given twice");
    }
  }

  std::size_t used = 0;
  std::set<std::uint32_t> level;
  for (const auto& [pos, _] : known) level.insert(pos);
  while (!(level.size() == 1 && *level.begin() == root_pos)) {
    std::set<std::uint32_t> next;
    for (std::uint32_t p : level) {
      const std::uint32_t parent = merkle_parent(p, n);
      if (known.count(parent) && next.count(parent)) continue;
      const std::uint32_t s = merkle_sibling(p);
      const Digest64* sib = nullptr;
      if (level.count(s)) {
        sib = &known.at(s);
      } else if (auto it = supplied.find(s); it != supplied.end()) {
        sib = &it->second;
        ++used;
      } else {
        return false;
      }
      const Digest64& self = known.at(p);
      known[parent] = p % 2 == 1 ? hash_pair(self, *sib) : hash_pair(*sib, self);
      next.insert(parent);
    }
    level = std::move(next);
  }
  return used == supplied.size() && known.at(root_pos) == root;
}

}  // namespace wpass
