// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wpass/passport.hpp"
#include "wpass/rules.hpp"

namespace wpass {

enum class ProofMode : std::uint8_t { Normal = 0, Exception = 1 };

std::string_view mode_name(ProofMode m);

/// Proving backends. The transparent backend is a trusted proving oracle:
/// the verifier learns only digests, and soundness against a dishonest
/// prover rests on prover-side refusal plus the shared attestation key.
enum class BackendId : std::uint8_t { Transparent = 1 };

std::string_view backend_name(BackendId b);

struct Statement {
  Digest64 ruleset_id;
  /// Empty at a chain start. Otherwise the hidden previous_hash cell of the
  /// new update, hide(k, i, 11, C_{i-1}), which binds the predecessor
  /// without exposing its root before the cell is opened.
  std::optional<Digest64> prev_commitment;
  Digest64 new_commitment;
  ProofMode mode = ProofMode::Normal;

  bool operator==(const Statement&) const = default;
};

/// be32 length-prefixed fields in declaration order, then the mode byte.
Bytes serialize_statement(const Statement& s);
Digest64 statement_digest(const Statement& s);

struct Witness {
  std::optional<PassportRow> prev_row;
  PassportRow new_row;
  PrfKey key;
  std::uint64_t prev_index = 0;
  std::uint64_t new_index = 0;
  const CountryProfile* profile = nullptr;
};

struct SessionParams {
  std::string crs_tag;
  std::array<std::uint8_t, 32> attestation_key{};
  BackendId backend = BackendId::Transparent;
};

struct ProofObject {
  BackendId backend = BackendId::Transparent;
  ProofMode mode = ProofMode::Normal;
  Digest64 statement_digest;
  Digest32 attestation;

  bool operator==(const ProofObject&) const = default;
};

/// Thrown by prove() in Normal mode when the transition breaks reject rules.
class RuleViolationsError : public Error {
 public:
  explicit RuleViolationsError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Builds the statement an honest prover publishes for this witness.
Statement make_statement(const Digest64& ruleset_id, const Witness& w, ProofMode mode);

/// Throws CommitmentMismatch, RuleViolationsError, MalformedException.
ProofObject prove(const Statement& statement, const Witness& witness, const SessionParams& session);

bool verify(const ProofObject& proof, const Statement& statement, const SessionParams& session);

/// Field indices the prover must open next to an Exception proof.
/// Throws NotException for Normal statements.
std::set<std::uint32_t> required_exception_openings(const Statement& statement);

/// backend (1) | mode (1) | statement digest (64) | attestation (32).
Bytes serialize_proof(const ProofObject& proof);
ProofObject parse_proof(ByteView bytes);
inline constexpr std::size_t kProofSize = 98;

}  // namespace wpass
