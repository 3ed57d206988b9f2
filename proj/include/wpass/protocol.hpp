// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wpass/ledger.hpp"
#include "wpass/message.hpp"
#include "wpass/rules.hpp"

namespace wpass {

/// Challenges may be issued at steps that are multiples of `interval`.
/// A `column_budget` of 0 means unlimited.
struct ChallengePolicy {
  std::uint64_t interval = 1;
  std::size_t column_budget = 0;
  bool strict = true;
  bool allow_repeat = true;
};

struct PartyConfig {
  Side side = Side::US;
  CountryProfile own_profile;
  CountryProfile peer_profile;
  RuleCatalog catalog;
  PrfKey prf_key;
  SessionParams session;
  ChallengePolicy policy;
  /// Warheads already in service at setup. Rows need no previous_hash:
  /// each row is linked to its predecessor as it is committed.
  std::vector<Passport> initial_passports;
};

/// One own update: the plaintext row and how it was committed.
struct OwnUpdate {
  std::string warhead_id;
  std::size_t row = 0;
  Commitment commitment;
  ProofMode mode = ProofMode::Normal;
};

struct ReceivedCommitment {
  Commitment commitment;
  Statement statement;
  ProofObject proof;
  bool verified = false;
  /// 1-based position among commitments received from the peer.
  std::uint64_t arrival = 0;
};

/// A challenge this party issued, and what came back.
struct ChallengeTranscript {
  std::uint64_t challenge_id = 0;
  Challenge challenge;
  std::optional<ChallengeResponse> response;
  bool valid = false;
  OpenedFields revealed;
  DeducedFacts facts;
};

struct ExceptionReport {
  std::uint64_t target = 0;
  bool valid = false;
  std::string reason;
  std::optional<std::string> decision;
};

struct PartyState {
  Side side = Side::US;
  CountryProfile profile;
  CountryProfile peer_profile;
  RuleCatalog catalog;
  Digest64 ruleset_id;
  PrfKey prf_key;
  SessionParams session;
  ChallengePolicy policy;

  std::map<std::string, Passport> passports;
  /// commitment_id -> own update. Ids equal the global update index.
  std::map<std::uint64_t, OwnUpdate> updates;
  std::map<std::string, std::uint64_t> latest;
  std::uint64_t next_update_index = 1;

  std::map<std::uint64_t, ReceivedCommitment> received;
  std::map<std::uint64_t, ChallengeTranscript> challenges;
  std::map<std::uint64_t, ExceptionReport> exceptions;
  /// Edges from a challenged commitment to the predecessor its opened
  /// previous_hash names.
  std::map<std::uint64_t, std::uint64_t> link_graph;
  std::uint64_t next_challenge_id = 1;

  Ledger ledger;
  /// Phase tag stamped on COMMIT and VERIFY records.
  std::string phase = "setup";

  std::uint64_t next_seq = 1;
  /// Serialized messages awaiting an Ack, by sequence number.
  std::map<std::uint64_t, Bytes> outbox;
  /// Messages from the peer are processed in sequence order.
  std::uint64_t peer_next_seq = 1;
  std::map<std::uint64_t, Message> held;
};

PartyState make_party(PartyConfig config);

/// Commits the first row of a new passport. Throws SchemaError if the
/// warhead already exists and propagates prove() errors.
std::vector<Message> start_passport(PartyState& party, const std::string& warhead_id,
                                    PassportRow row);

/// Commits and proves `row` as the next update of `warhead_id`. The row's
/// previous_hash must equal the passport's latest root. Rows flagged as
/// exceptional get an Exception proof plus an ExceptionMsg that opens the
/// flag and reason cells.
/// Throws UnknownTarget, CommitmentMismatch, and whatever prove() throws.
std::vector<Message> emit_update(PartyState& party, const std::string& warhead_id,
                                 const PassportRow& row);

/// Processes one delivery and returns what the party sends in reply. Every
/// message except an Ack is acknowledged, duplicates included; duplicates
/// change nothing else. Throws UnknownTarget for a challenge naming a
/// commitment this party never made.
std::vector<Message> handle_message(PartyState& party, const Message& msg);

/// Throws UnknownTarget, ScheduleViolation, and SchemaError for an empty
/// column set.
Message issue_challenge(PartyState& party, std::uint64_t target, const std::set<Field>& columns,
                        std::uint64_t step);

/// Records the reviewer's verdict on a received exception.
void record_decision(PartyState& party, std::uint64_t target, const std::string& outcome);

/// True iff every link edge is backed by a valid response whose opened
/// previous_hash equals the stored root of the edge's head.
bool recheck_links(const PartyState& party);

struct FaultPlan {
  double drop = 0.0;
  double duplicate = 0.0;
  /// Extra delivery delay drawn uniformly from 0..reorder_window steps.
  std::uint32_t reorder_window = 0;
  /// Unacked messages are resent after this many steps.
  std::uint32_t retransmit_after = 4;
  /// Later attempts are never dropped, so delivery is eventual.
  std::uint32_t max_drops = 3;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 1'000'000;
};

/// Deterministic lossy channel between the two parties, driven by a
/// logical step clock.
class Transport {
 public:
  explicit Transport(FaultPlan plan);

  void send(const Message& m);
  /// Delivers until no message is in flight and both outboxes are empty.
  /// Throws ScenarioError if that takes more than plan.max_steps.
  void run(PartyState& a, PartyState& b);

  std::uint64_t now() const { return now_; }
  std::uint64_t delivered() const { return delivered_; }

 private:
  struct InFlight {
    std::uint64_t due = 0;
    std::uint64_t order = 0;
    Side to = Side::US;
    Bytes wire;
  };

  void enqueue(Side to, Bytes wire, std::uint32_t attempt);
  void resend_overdue(PartyState& party);

  FaultPlan plan_;
  std::mt19937_64 rng_;
  std::vector<InFlight> queue_;
  struct Tracking {
    std::uint32_t attempts = 0;
    std::uint64_t last_sent = 0;
  };
  std::map<std::pair<Side, std::uint64_t>, Tracking> sends_;
  std::map<std::pair<Side, std::uint64_t>, std::uint32_t> ack_attempts_;
  std::uint64_t now_ = 0;
  std::uint64_t order_ = 0;
  std::uint64_t delivered_ = 0;
};

/// Loads both parties, checks that their rule catalogs and ruleset ids
/// agree, and exchanges and verifies every initial commitment over
/// `transport`. Throws RulesetMismatch and SetupVerifyFailure.
std::pair<PartyState, PartyState> setup(PartyConfig blue, PartyConfig red, Transport& transport);

}  // namespace wpass
