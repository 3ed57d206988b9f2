// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/proof.hpp"

namespace wpass {

namespace {

constexpr std::string_view kAttestationLabel = "wpass/transparent/v1";

void append_prefixed(Bytes& out, ByteView part) {
  append_be32(out, static_cast<std::uint32_t>(part.size()));
  append(out, part);
}

Digest32 attest(const Digest64& digest, ProofMode mode, const SessionParams& session) {
  Bytes msg = to_bytes(kAttestationLabel);
  append_prefixed(msg, to_bytes(session.crs_tag));
  msg.push_back(static_cast<std::uint8_t>(session.backend));
  msg.push_back(static_cast<std::uint8_t>(mode));
  append(msg, digest);
  return hmac_sha256(session.attestation_key, msg);
}

bool equal_ct(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc |= a[i] ^ b[i];
  return acc == 0;
}

std::string summarize(const std::vector<Violation>& vs) {
  std::string out = std::to_string(vs.size()) + " rule violation(s):";
  for (const auto& v : vs) out += " " + v.rule_id;
  return out;
}

Digest64 prev_link(const Witness& w) {
  return hide(w.key, w.new_index, field_index(Field::PreviousHash),
              encode_field(w.new_row, Field::PreviousHash, *w.profile));
}

}  // namespace

std::string_view mode_name(ProofMode m) { return m == ProofMode::Normal ? "normal" : "exception"; }

std::string_view backend_name(BackendId) { return "transparent"; }

RuleViolationsError::RuleViolationsError(std::vector<Violation> violations)
    : Error(Errc::RuleViolations, summarize(violations)), violations_(std::move(violations)) {}

Bytes serialize_statement(const Statement& s) {
  Bytes out;
  append_prefixed(out, s.ruleset_id);
  append_prefixed(out, s.prev_commitment ? ByteView(*s.prev_commitment) : ByteView());
  append_prefixed(out, s.new_commitment);
  out.push_back(static_cast<std::uint8_t>(s.mode));
  return out;
}

Digest64 statement_digest(const Statement& s) { return combined_hash(serialize_statement(s)); }

Statement make_statement(const Digest64& ruleset_id, const Witness& w, ProofMode mode) {
  Statement s;
  s.ruleset_id = ruleset_id;
  if (w.prev_row) s.prev_commitment = prev_link(w);
  s.new_commitment = commit(w.key, w.new_index, w.new_row, *w.profile).root;
  s.mode = mode;
  return s;
}

ProofObject prove(const Statement& statement, const Witness& witness, const SessionParams& session) {
  if (!witness.profile) throw Error(Errc::SchemaError, "witness has no profile");
  const CountryProfile& profile = *witness.profile;

  const Commitment fresh = commit(witness.key, witness.new_index, witness.new_row, profile);
  if (fresh.root != statement.new_commitment) {
    throw Error(Errc::CommitmentMismatch, "new row does not open the statement's commitment");
  }
  if (witness.prev_row.has_value() != statement.prev_commitment.has_value()) {
    throw Error(Errc::CommitmentMismatch, "chain-start flag differs between statement and witness");
  }
  if (witness.prev_row) {
    const Commitment before = commit(witness.key, witness.prev_index, *witness.prev_row, profile);
    if (witness.new_row.previous_hash != before.root) {
      throw Error(Errc::CommitmentMismatch, "new row is not linked to the previous row's commitment");
    }
    if (prev_link(witness) != *statement.prev_commitment) {
      throw Error(Errc::CommitmentMismatch, "statement names a different predecessor");
    }
  } else if (witness.new_row.previous_hash) {
    throw Error(Errc::CommitmentMismatch, "chain start carries a previous hash");
  }

  const PassportRow* prev = witness.prev_row ? &*witness.prev_row : nullptr;
  if (statement.mode == ProofMode::Normal) {
    auto violations = validate_transition({prev, witness.new_row, profile});
    std::erase_if(violations, [](const Violation& v) { return v.severity != Severity::Reject; });
    if (!violations.empty()) throw RuleViolationsError(std::move(violations));
    if (witness.new_row.exception) {
      throw Error(Errc::MalformedException, "row is flagged exceptional but the statement is normal");
    }
  } else {
    if (!witness.new_row.exception || witness.new_row.exception_reason.empty()) {
      throw Error(Errc::MalformedException, "exception statement needs the flag and a reason");
    }
  }

  const Digest64 digest = statement_digest(statement);
  return ProofObject{session.backend, statement.mode, digest, attest(digest, statement.mode, session)};
}

bool verify(const ProofObject& proof, const Statement& statement, const SessionParams& session) {
  if (proof.backend != session.backend || proof.mode != statement.mode) return false;
  const Digest64 digest = statement_digest(statement);
  if (!equal_ct(proof.statement_digest, digest)) return false;
  return equal_ct(proof.attestation, attest(digest, statement.mode, session));
}

std::set<std::uint32_t> required_exception_openings(const Statement& statement) {
  if (statement.mode != ProofMode::Exception) {
    throw Error(Errc::NotException, "statement is in normal mode");
  }
  return {field_index(Field::Exception), field_index(Field::ExceptionReason)};
}

Bytes serialize_proof(const ProofObject& proof) {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(proof.backend));
  out.push_back(static_cast<std::uint8_t>(proof.mode));
  append(out, proof.statement_digest);
  append(out, proof.attestation);
  return out;
}

ProofObject parse_proof(ByteView bytes) {
  if (bytes.size() != kProofSize) {
    throw Error(Errc::SchemaError, "proof is " + std::to_string(bytes.size()) + " bytes");
  }
  if (bytes[0] != static_cast<std::uint8_t>(BackendId::Transparent) || bytes[1] > 1) {
    throw Error(Errc::SchemaError, "unknown proof backend or mode");
  }
  ProofObject p;
  p.backend = static_cast<BackendId>(bytes[0]);
  p.mode = static_cast<ProofMode>(bytes[1]);
  p.statement_digest = Digest64::from(bytes.subspan(2, 64));
  p.attestation = Digest32::from(bytes.subspan(66, 32));
  return p;
}

}  // namespace wpass
