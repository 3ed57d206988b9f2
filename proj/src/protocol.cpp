// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/protocol.hpp"

#include <algorithm>

namespace wpass {

using nlohmann::json;

namespace {

Side other(Side s) { return s == Side::US ? Side::RU : Side::US; }

Message stamp(PartyState& party, Payload payload) {
  Message m{party.side, party.next_seq++, std::move(payload)};
  party.outbox.emplace(m.seq, serialize_message(m));
  return m;
}

json columns_json(const std::set<Field>& columns) {
  json out = json::array();
  for (Field f : columns) out.push_back(field_name(f));
  return out;
}

json facts_json(const DeducedFacts& facts) {
  json out = json::array();
  for (const auto& f : facts) {
    out.push_back({{"target", fact_target_name(f.target)},
                   {"field", field_name(f.field)},
                   {"relation", relation_name(f.relation)},
                   {"value", f.value},
                   {"rule", f.rule_id}});
  }
  return out;
}

ChallengeResponse disclose(const PartyState& party, std::uint64_t id, const std::set<Field>& columns) {
  const OwnUpdate& u = party.updates.at(id);
  const PassportRow& row = party.passports.at(u.warhead_id).rows.at(u.row);
  const std::uint64_t index = u.commitment.update_index;
  const auto encoded = encode_row(row, party.profile);
  ChallengeResponse r;
  r.target = id;
  std::set<std::uint32_t> indices;
  for (Field f : columns) {
    const std::uint32_t j = field_index(f);
    r.openings.push_back(open_cell(party.prf_key, index, j, encoded[j - 1]));
    indices.insert(j);
  }
  r.inclusion = prove_inclusion(indices, hide_fields(party.prf_key, index, encoded));
  return r;
}

// Checks that `r` opens exactly `columns` of the stored commitment.
bool check_disclosure(const PartyState& party, const ChallengeResponse& r, const std::set<Field>& columns) {
  const auto it = party.received.find(r.target);
  if (it == party.received.end()) return false;
  std::set<std::uint32_t> opened;
  for (const auto& o : r.openings) {
    if (!opened.insert(o.field_index).second) return false;
  }
  std::set<std::uint32_t> wanted;
  for (Field f : columns) wanted.insert(field_index(f));
  if (opened != wanted) return false;
  try {
    return verify_inclusion(r.inclusion, r.openings, it->second.commitment.root,
                            it->second.commitment.update_index);
  } catch (const Error&) {
    return false;
  }
}

std::optional<OpenedFields> render_openings(const PartyState& party, const ChallengeResponse& r) {
  OpenedFields out;
  try {
    for (const auto& o : r.openings) {
      const Field f = field_at(o.field_index);
      out[f] = render_field(f, o.value, party.peer_profile);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

std::vector<Message> commit_row(PartyState& party, const std::string& warhead_id, PassportRow row,
                                 std::optional<std::uint64_t> prev_id) {
  Witness w;
  w.new_row = row;
  w.key = party.prf_key;
  w.new_index = party.next_update_index;
  w.profile = &party.profile;
  if (prev_id) {
    const OwnUpdate& prev = party.updates.at(*prev_id);
    w.prev_row = party.passports.at(warhead_id).rows.at(prev.row);
    w.prev_index = prev.commitment.update_index;
  }
  const ProofMode mode = row.exception ? ProofMode::Exception : ProofMode::Normal;
  const Statement statement = make_statement(party.ruleset_id, w, mode);
  const ProofObject proof = prove(statement, w, party.session);

  Commitment c = commit(party.prf_key, w.new_index, row, party.profile);
  c.commitment_id = w.new_index;
  ++party.next_update_index;
  Passport& passport = party.passports[warhead_id];
  passport.warhead_id = warhead_id;
  passport.rows.push_back(std::move(row));
  party.updates[c.commitment_id] = OwnUpdate{warhead_id, passport.rows.size() - 1, c, mode};
  party.latest[warhead_id] = c.commitment_id;

  json record = {{"phase", party.phase},
                 {"id", c.commitment_id},
                 {"update_index", c.update_index},
                 {"root", c.root.hex()},
                 {"mode", mode_name(mode)}};
  std::vector<Message> out;
  out.push_back(stamp(party, CommitmentPayload{c, statement, proof}));
  if (mode == ProofMode::Exception) {
    std::set<Field> cells;
    for (std::uint32_t j : required_exception_openings(statement)) cells.insert(field_at(j));
    record["opened"] = columns_json(cells);
    out.push_back(stamp(party, ExceptionPayload{disclose(party, c.commitment_id, cells)}));
  }
  party.ledger.append(RecordKind::Commit, std::move(record));
  return out;
}

void on_commitment(PartyState& party, const CommitmentPayload& p) {
  const std::uint64_t id = p.commitment.commitment_id;
  if (party.received.contains(id)) return;
  const bool ok = p.statement.ruleset_id == party.ruleset_id &&
                  p.statement.new_commitment == p.commitment.root &&
                  verify(p.proof, p.statement, party.session);
  const std::uint64_t arrival = party.received.size() + 1;
  party.received[id] = ReceivedCommitment{p.commitment, p.statement, p.proof, ok, arrival};
  party.ledger.append(RecordKind::Verify,
                      {{"phase", party.phase},
                       {"id", id},
                       {"update_index", p.commitment.update_index},
                       {"root", p.commitment.root.hex()},
                       {"prev_link", p.statement.prev_commitment ? json(p.statement.prev_commitment->hex())
                                                                 : json(nullptr)},
                       {"mode", mode_name(p.statement.mode)},
                       {"verified", ok},
                       {"arrival", arrival}});
}

void on_exception(PartyState& party, const ExceptionPayload& p) {
  const ChallengeResponse& d = p.disclosure;
  if (party.exceptions.contains(d.target)) return;
  const auto it = party.received.find(d.target);
  if (it == party.received.end()) {
    throw Error(Errc::UnknownTarget, "exception disclosure for unknown commitment " + std::to_string(d.target));
  }
  ExceptionReport report{d.target, false, "", std::nullopt};
  const std::set<Field> cells = {Field::Exception, Field::ExceptionReason};
  if (it->second.statement.mode == ProofMode::Exception && it->second.verified &&
      check_disclosure(party, d, cells)) {
    if (const auto shown = render_openings(party, d)) {
      report.reason = shown->at(Field::ExceptionReason);
      report.valid = shown->at(Field::Exception) == "true" && !report.reason.empty();
    }
  }
  party.exceptions[d.target] = report;
  party.ledger.append(RecordKind::Exception,
                      {{"id", d.target}, {"valid", report.valid}, {"reason", report.reason}});
}

Message on_challenge(PartyState& party, const ChallengePayload& p) {
  if (!party.updates.contains(p.challenge.target)) {
    throw Error(Errc::UnknownTarget,
                "challenge " + std::to_string(p.challenge_id) + " names unknown commitment " +
                    std::to_string(p.challenge.target));
  }
  ChallengeResponse r = disclose(party, p.challenge.target, p.challenge.columns);
  party.ledger.append(RecordKind::Response, {{"role", "prover"},
                                             {"challenge", p.challenge_id},
                                             {"target", p.challenge.target},
                                             {"columns", columns_json(p.challenge.columns)}});
  return stamp(party, ResponsePayload{p.challenge_id, std::move(r)});
}

void on_response(PartyState& party, const ResponsePayload& p) {
  const auto it = party.challenges.find(p.challenge_id);
  if (it == party.challenges.end()) {
    throw Error(Errc::UnknownTarget, "response to unknown challenge " + std::to_string(p.challenge_id));
  }
  ChallengeTranscript& t = it->second;
  if (t.response) return;
  t.response = p.response;
  t.valid = p.response.target == t.challenge.target && check_disclosure(party, p.response, t.challenge.columns);
  if (t.valid) {
    if (auto shown = render_openings(party, p.response)) {
      t.revealed = std::move(*shown);
      t.facts = infer_adjacent(t.revealed, party.peer_profile);
    } else {
      t.valid = false;
    }
  }

  json revealed = json::object();
  for (const auto& [f, v] : t.revealed) revealed[std::string(field_name(f))] = v;
  party.ledger.append(RecordKind::Response, {{"role", "challenger"},
                                             {"challenge", t.challenge_id},
                                             {"target", t.challenge.target},
                                             {"valid", t.valid},
                                             {"revealed", revealed},
                                             {"facts", facts_json(t.facts)}});
  if (!t.valid) return;

  for (const auto& o : p.response.openings) {
    if (o.field_index != field_index(Field::PreviousHash) || o.value.size() != Digest64::size()) continue;
    const Digest64 named = Digest64::from(o.value);
    for (const auto& [id, rc] : party.received) {
      if (rc.commitment.root != named) continue;
      party.link_graph[t.challenge.target] = id;
      party.ledger.append(RecordKind::Link, {{"from", t.challenge.target},
                                             {"to", id},
                                             {"challenge", t.challenge_id},
                                             {"facts", facts_json(t.facts)}});
      break;
    }
  }
}

}  // namespace

PartyState make_party(PartyConfig config) {
  PartyState p;
  p.side = config.side;
  p.profile = std::move(config.own_profile);
  p.peer_profile = std::move(config.peer_profile);
  p.catalog = std::move(config.catalog);
  p.prf_key = config.prf_key;
  p.prf_key.owner = config.side;
  p.session = std::move(config.session);
  p.policy = config.policy;
  const bool us = p.side == Side::US;
  p.ruleset_id = compute_ruleset_id(p.catalog, us ? p.profile : p.peer_profile, us ? p.peer_profile : p.profile);
  return p;
}

std::vector<Message> start_passport(PartyState& party, const std::string& warhead_id, PassportRow row) {
  if (party.passports.contains(warhead_id)) {
    throw Error(Errc::SchemaError, "passport " + warhead_id + " already exists");
  }
  return commit_row(party, warhead_id, std::move(row), std::nullopt);
}

std::vector<Message> emit_update(PartyState& party, const std::string& warhead_id, const PassportRow& row) {
  const auto it = party.latest.find(warhead_id);
  if (it == party.latest.end()) throw Error(Errc::UnknownTarget, "no passport " + warhead_id);
  if (row.previous_hash != party.updates.at(it->second).commitment.root) {
    throw Error(Errc::CommitmentMismatch, "row does not link to the latest commitment of " + warhead_id);
  }
  return commit_row(party, warhead_id, row, it->second);
}

std::vector<Message> handle_message(PartyState& party, const Message& msg) {
  if (const auto* ack = std::get_if<AckPayload>(&msg.payload)) {
    party.outbox.erase(ack->acked_seq);
    return {};
  }
  if (msg.sender == party.side) throw Error(Errc::SchemaError, "message from own side");
  std::vector<Message> out;
  out.push_back(Message{party.side, 0, AckPayload{msg.seq}});
  if (msg.seq < party.peer_next_seq || party.held.contains(msg.seq)) return out;
  party.held.emplace(msg.seq, msg);

  for (auto it = party.held.find(party.peer_next_seq); it != party.held.end();
       it = party.held.find(party.peer_next_seq)) {
    const Message m = std::move(it->second);
    party.held.erase(it);
    ++party.peer_next_seq;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, CommitmentPayload>) {
            on_commitment(party, p);
          } else if constexpr (std::is_same_v<T, ExceptionPayload>) {
            on_exception(party, p);
          } else if constexpr (std::is_same_v<T, ChallengePayload>) {
            out.push_back(on_challenge(party, p));
          } else if constexpr (std::is_same_v<T, ResponsePayload>) {
            on_response(party, p);
          }
        },
        m.payload);
  }
  return out;
}

Message issue_challenge(PartyState& party, std::uint64_t target, const std::set<Field>& columns,
                        std::uint64_t step) {
  if (!party.received.contains(target)) {
    throw Error(Errc::UnknownTarget, "commitment " + std::to_string(target) + " was never received");
  }
  Challenge c = Challenge::make(target, columns);
  const ChallengePolicy& policy = party.policy;
  if (policy.strict && policy.interval > 0 && step % policy.interval != 0) {
    throw Error(Errc::ScheduleViolation, "step " + std::to_string(step) + " is not on the " +
                                             std::to_string(policy.interval) + "-step challenge interval");
  }
  if (policy.column_budget > 0 && columns.size() > policy.column_budget) {
    throw Error(Errc::ScheduleViolation, std::to_string(columns.size()) + " columns exceed the budget of " +
                                             std::to_string(policy.column_budget));
  }
  if (!policy.allow_repeat) {
    for (const auto& [id, t] : party.challenges) {
      if (t.challenge.target == target) {
        throw Error(Errc::ScheduleViolation, "commitment " + std::to_string(target) + " was already challenged");
      }
    }
  }
  const std::uint64_t id = party.next_challenge_id++;
  party.challenges[id] = ChallengeTranscript{id, c, std::nullopt, false, {}, {}};
  party.ledger.append(RecordKind::Challenge,
                      {{"challenge", id}, {"target", target}, {"columns", columns_json(columns)}, {"step", step}});
  return stamp(party, ChallengePayload{id, std::move(c)});
}

void record_decision(PartyState& party, std::uint64_t target, const std::string& outcome) {
  if (outcome != "accept" && outcome != "escalate") {
    throw Error(Errc::SchemaError, "decision must be accept or escalate, got '" + outcome + "'");
  }
  const auto it = party.exceptions.find(target);
  if (it == party.exceptions.end()) {
    throw Error(Errc::UnknownTarget, "no exception received for commitment " + std::to_string(target));
  }
  it->second.decision = outcome;
  party.ledger.append(RecordKind::Decision, {{"target", target}, {"outcome", outcome}});
}

bool recheck_links(const PartyState& party) {
  for (const auto& [from, to] : party.link_graph) {
    const auto head = party.received.find(from);
    const auto tail = party.received.find(to);
    if (head == party.received.end() || tail == party.received.end()) return false;
    bool backed = false;
    for (const auto& [id, t] : party.challenges) {
      if (!t.response || t.challenge.target != from) continue;
      const auto& r = *t.response;
      const auto opened = std::find_if(r.openings.begin(), r.openings.end(), [](const CellOpening& o) {
        return o.field_index == field_index(Field::PreviousHash);
      });
      if (opened == r.openings.end() || opened->value != tail->second.commitment.root.to_vector()) continue;
      try {
        backed = verify_inclusion(r.inclusion, r.openings, head->second.commitment.root,
                                  head->second.commitment.update_index);
      } catch (const Error&) {
        backed = false;
      }
      if (backed) break;
    }
    if (!backed) return false;
  }
  return true;
}

Transport::Transport(FaultPlan plan) : plan_(plan), rng_(plan.seed) {}

void Transport::enqueue(Side to, Bytes wire, std::uint32_t attempt) {
  std::bernoulli_distribution drop(plan_.drop);
  std::bernoulli_distribution dup(plan_.duplicate);
  std::uniform_int_distribution<std::uint32_t> delay(0, plan_.reorder_window);
  const bool dropped = attempt <= plan_.max_drops && drop(rng_);
  const bool duplicated = dup(rng_);
  if (!dropped) queue_.push_back({now_ + 1 + delay(rng_), order_++, to, wire});
  if (duplicated) queue_.push_back({now_ + 1 + delay(rng_), order_++, to, std::move(wire)});
}

void Transport::send(const Message& m) {
  std::uint32_t attempt = 0;
  if (const auto* ack = std::get_if<AckPayload>(&m.payload)) {
    attempt = ++ack_attempts_[{m.sender, ack->acked_seq}];
  } else {
    Tracking& t = sends_[{m.sender, m.seq}];
    attempt = ++t.attempts;
    t.last_sent = now_;
  }
  enqueue(other(m.sender), serialize_message(m), attempt);
}

void Transport::resend_overdue(PartyState& party) {
  for (const auto& [seq, wire] : party.outbox) {
    Tracking& t = sends_[{party.side, seq}];
    if (now_ - t.last_sent < plan_.retransmit_after) continue;
    ++t.attempts;
    t.last_sent = now_;
    enqueue(other(party.side), wire, t.attempts);
  }
}

void Transport::run(PartyState& a, PartyState& b) {
  const std::uint64_t start = now_;
  auto party_for = [&](Side s) -> PartyState& { return a.side == s ? a : b; };
  while (!queue_.empty() || !a.outbox.empty() || !b.outbox.empty()) {
    if (++now_ - start > plan_.max_steps) {
      throw Error(Errc::ScenarioError, "transport did not settle within " + std::to_string(plan_.max_steps) + " steps");
    }
    std::vector<InFlight> due;
    std::erase_if(queue_, [&](InFlight& f) {
      if (f.due > now_) return false;
      due.push_back(std::move(f));
      return true;
    });
    std::sort(due.begin(), due.end(), [](const InFlight& x, const InFlight& y) {
      return std::tie(x.due, x.order) < std::tie(y.due, y.order);
    });
    for (const auto& f : due) {
      ++delivered_;
      for (const auto& reply : handle_message(party_for(f.to), parse_message(f.wire))) send(reply);
    }
    resend_overdue(a);
    resend_overdue(b);
  }
}

std::pair<PartyState, PartyState> setup(PartyConfig blue, PartyConfig red, Transport& transport) {
  if (blue.side == red.side) throw Error(Errc::SchemaError, "both parties claim the same side");
  if (blue.catalog.version_hash() != red.catalog.version_hash()) {
    throw Error(Errc::RulesetMismatch, "rule catalogs differ: " + blue.catalog.version + " vs " + red.catalog.version);
  }
  auto initial_blue = std::move(blue.initial_passports);
  auto initial_red = std::move(red.initial_passports);
  PartyState a = make_party(std::move(blue));
  PartyState b = make_party(std::move(red));
  if (a.ruleset_id != b.ruleset_id) {
    throw Error(Errc::RulesetMismatch, "parties derive different ruleset ids from their profiles");
  }

  std::size_t rows_a = 0;
  std::size_t rows_b = 0;
  for (auto [party, peer, initial, rows] :
       {std::tuple{&a, &b, &initial_blue, &rows_a}, std::tuple{&b, &a, &initial_red, &rows_b}}) {
    party->ledger.append(RecordKind::Setup, {{"side", side_name(party->side)},
                                             {"peer", side_name(peer->side)},
                                             {"ruleset_id", party->ruleset_id.hex()},
                                             {"catalog_version", party->catalog.version},
                                             {"crs_tag", party->session.crs_tag},
                                             {"backend", backend_name(party->session.backend)}});
    for (const Passport& passport : *initial) {
      for (std::size_t k = 0; k < passport.rows.size(); ++k) {
        std::vector<Message> msgs;
        if (k == 0) {
          msgs = start_passport(*party, passport.warhead_id, link_row(passport.rows[0], std::nullopt));
        } else {
          const Commitment& prev = party->updates.at(party->latest.at(passport.warhead_id)).commitment;
          msgs = emit_update(*party, passport.warhead_id, link_row(passport.rows[k], prev));
        }
        for (const auto& m : msgs) transport.send(m);
        ++*rows;
      }
    }
  }
  transport.run(a, b);

  for (auto [party, expected] : {std::pair{&a, rows_b}, std::pair{&b, rows_a}}) {
    const bool all_ok = std::all_of(party->received.begin(), party->received.end(),
                                    [](const auto& kv) { return kv.second.verified; });
    if (!all_ok || party->received.size() != expected) {
      throw Error(Errc::SetupVerifyFailure,
                  std::string(side_name(party->side)) + " could not verify every initial commitment");
    }
    party->phase = "exchange";
  }
  return {std::move(a), std::move(b)};
}

}  // namespace wpass
