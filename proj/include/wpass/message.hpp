// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include "wpass/commitment.hpp"
#include "wpass/passport.hpp"
#include "wpass/proof.hpp"

namespace wpass {

enum class MessageKind : std::uint8_t {
  Commitment = 1,
  Challenge = 2,
  Response = 3,
  Exception = 4,
  Ack = 5,
};

std::string_view message_kind_name(MessageKind k);

/// A request to open `columns` of a commitment the challenger has received.
struct Challenge {
  std::uint64_t target = 0;
  std::set<Field> columns;

  /// Throws SchemaError on an empty column set.
  static Challenge make(std::uint64_t target, std::set<Field> columns);

  bool operator==(const Challenge&) const = default;
};

/// Openings for exactly the challenged columns plus one aggregated proof.
struct ChallengeResponse {
  std::uint64_t target = 0;
  std::vector<CellOpening> openings;
  InclusionProof inclusion;

  bool operator==(const ChallengeResponse&) const = default;
};

struct CommitmentPayload {
  Commitment commitment;
  Statement statement;
  ProofObject proof;

  bool operator==(const CommitmentPayload&) const = default;
};

struct ChallengePayload {
  std::uint64_t challenge_id = 0;
  Challenge challenge;

  bool operator==(const ChallengePayload&) const = default;
};

struct ResponsePayload {
  std::uint64_t challenge_id = 0;
  ChallengeResponse response;

  bool operator==(const ResponsePayload&) const = default;
};

/// The exception flag and reason cells of an Exception-mode commitment.
struct ExceptionPayload {
  ChallengeResponse disclosure;

  bool operator==(const ExceptionPayload&) const = default;
};

struct AckPayload {
  std::uint64_t acked_seq = 0;

  bool operator==(const AckPayload&) const = default;
};

using Payload =
    std::variant<CommitmentPayload, ChallengePayload, ResponsePayload, ExceptionPayload, AckPayload>;

/// Sequence numbers start at 1 per sender. Acks carry seq 0 and are never
/// acknowledged themselves.
struct Message {
  Side sender = Side::US;
  std::uint64_t seq = 0;
  Payload payload;

  MessageKind kind() const;
  bool operator==(const Message&) const = default;
};

Bytes serialize_message(const Message& m);
/// Throws SchemaError on truncated or trailing input and unknown tags.
Message parse_message(ByteView bytes);

}  // namespace wpass
