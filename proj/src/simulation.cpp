// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/simulation.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

namespace wpass {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::ScenarioError, path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(path, std::string("missing key '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    fail(path, e.what());
  }
}

Side side_at(const json& j, const std::string& path) {
  try {
    return parse_side(get<std::string>(j, path));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::array<std::uint8_t, 32> key_at(const json& j, const std::string& path) {
  try {
    const Bytes raw = from_hex(get<std::string>(j, path));
    if (raw.size() != 32) fail(path, "expected 32 bytes of hex");
    std::array<std::uint8_t, 32> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
  } catch (const Error& e) {
    if (e.code() == Errc::ScenarioError) throw;
    fail(path, e.what());
  }
}

PassportRow row_at(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "row must be an object");
  PassportRow r;
  const json& t = need(j, "time", path);
  try {
    r.time = t.is_string() ? parse_iso8601(t.get<std::string>()) : get<std::uint64_t>(t, path + ".time");
  } catch (const Error& e) {
    if (e.code() == Errc::ScenarioError) throw;
    fail(path + ".time", e.what());
  }
  r.location = get<std::string>(need(j, "location", path), path + ".location");
  r.status = get<std::string>(need(j, "status", path), path + ".status");
  r.operation = get<std::string>(need(j, "operation", path), path + ".operation");
  r.secondary_component = get<std::string>(j.value("secondary_component", json("")), path + ".secondary_component");
  r.llc1 = get<std::string>(j.value("llc1", json("")), path + ".llc1");
  r.llc2 = get<std::string>(j.value("llc2", json("")), path + ".llc2");
  r.personnel = get<std::vector<std::string>>(j.value("personnel", json::array()), path + ".personnel");
  r.exception = get<bool>(j.value("exception", json(false)), path + ".exception");
  r.exception_reason = get<std::string>(j.value("exception_reason", json("")), path + ".exception_reason");
  return r;
}

std::set<Field> columns_at(const json& j, const std::string& path) {
  std::set<Field> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    try {
      out.insert(parse_field(get<std::string>(j.at(k), p)));
    } catch (const Error& e) {
      if (e.code() == Errc::ScenarioError) throw;
      fail(p, e.what());
    }
  }
  return out;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

json violation_json(Side side, const std::string& warhead, const Violation& v) {
  return {{"side", side_name(side)},
          {"warhead", warhead},
          {"rule", v.rule_id},
          {"severity", severity_name(v.severity)},
          {"message", v.message}};
}

}  // namespace

FaultPlan parse_fault_plan(const json& j, FaultPlan base) {
  const std::string path = "$.fault_plan";
  if (!j.is_object()) fail(path, "fault plan must be an object");
  base.drop = get<double>(j.value("drop", json(base.drop)), path + ".drop");
  base.duplicate = get<double>(j.value("duplicate", json(base.duplicate)), path + ".duplicate");
  base.reorder_window = get<std::uint32_t>(j.value("reorder_window", json(base.reorder_window)), path + ".reorder_window");
  base.retransmit_after =
      get<std::uint32_t>(j.value("retransmit_after", json(base.retransmit_after)), path + ".retransmit_after");
  base.max_drops = get<std::uint32_t>(j.value("max_drops", json(base.max_drops)), path + ".max_drops");
  base.seed = get<std::uint64_t>(j.value("seed", json(base.seed)), path + ".seed");
  if (base.drop < 0 || base.drop >= 1 || base.duplicate < 0 || base.duplicate > 1) {
    fail(path, "drop must be in [0, 1) and duplicate in [0, 1]");
  }
  if (base.retransmit_after == 0) fail(path + ".retransmit_after", "must be positive");
  return base;
}

Scenario load_scenario(std::string_view text, const std::string& profile_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ScenarioError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  Scenario s;
  s.name = get<std::string>(doc.value("name", json("")), "$.name");

  const json& profiles = need(doc, "profiles", "$");
  auto load_at = [&](const char* key, auto loader) {
    const std::string p = "$.profiles." + std::string(key);
    const std::string file = profile_dir + "/" + get<std::string>(need(profiles, key, "$.profiles"), p);
    try {
      return loader(file);
    } catch (const Error& e) {
      fail(p, e.what());
    }
  };
  const CountryProfile us = load_at("US", load_profile_file);
  const CountryProfile ru = load_at("RU", load_profile_file);
  const RuleCatalog catalog = load_at("catalog", load_catalog_file);
  if (us.side != Side::US || ru.side != Side::RU) fail("$.profiles", "profile sides do not match their keys");

  ChallengePolicy policy;
  const json schedule = doc.value("challenge_schedule", json::object());
  policy.interval = get<std::uint64_t>(schedule.value("interval", json(1)), "$.challenge_schedule.interval");
  policy.column_budget =
      get<std::size_t>(schedule.value("column_budget", json(0)), "$.challenge_schedule.column_budget");
  policy.strict = get<bool>(schedule.value("strict", json(true)), "$.challenge_schedule.strict");
  policy.allow_repeat = get<bool>(schedule.value("allow_repeat", json(true)), "$.challenge_schedule.allow_repeat");

  const json& session = need(doc, "session", "$");
  SessionParams params;
  params.crs_tag = get<std::string>(need(session, "crs_tag", "$.session"), "$.session.crs_tag");
  params.attestation_key = key_at(need(session, "attestation_key", "$.session"), "$.session.attestation_key");

  const json& parties = need(doc, "parties", "$");
  for (auto [side, cfg] : {std::pair{Side::US, &s.us}, std::pair{Side::RU, &s.ru}}) {
    const std::string key(side_name(side));
    const std::string p = "$.parties." + key;
    cfg->side = side;
    cfg->own_profile = side == Side::US ? us : ru;
    cfg->peer_profile = side == Side::US ? ru : us;
    cfg->catalog = catalog;
    cfg->session = params;
    cfg->policy = policy;
    cfg->prf_key.key = key_at(need(need(parties, key.c_str(), "$.parties"), "prf_key", p), p + ".prf_key");
    cfg->prf_key.owner = side;
  }

  const json initial = doc.value("initial_passports", json::array());
  for (std::size_t k = 0; k < initial.size(); ++k) {
    const std::string p = "$.initial_passports[" + std::to_string(k) + "]";
    const json& entry = initial.at(k);
    const Side side = side_at(need(entry, "side", p), p + ".side");
    Passport passport;
    passport.warhead_id = get<std::string>(need(entry, "warhead", p), p + ".warhead");
    const json& rows = need(entry, "rows", p);
    if (!rows.is_array() || rows.empty()) fail(p + ".rows", "need at least one row");
    auto& labels = s.initial_labels[{side, passport.warhead_id}];
    if (!labels.empty()) fail(p + ".warhead", "duplicate warhead " + passport.warhead_id);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rp = p + ".rows[" + std::to_string(r) + "]";
      passport.rows.push_back(row_at(rows.at(r), rp));
      labels.push_back(get<std::string>(rows.at(r).value("label", json("")), rp + ".label"));
    }
    (side == Side::US ? s.us : s.ru).initial_passports.push_back(std::move(passport));
  }

  const json events = doc.value("events", json::array());
  for (std::size_t k = 0; k < events.size(); ++k) {
    const std::string p = "$.events[" + std::to_string(k) + "]";
    const json& e = events.at(k);
    ScenarioEvent ev;
    ev.at = get<std::uint64_t>(need(e, "at", p), p + ".at");
    ev.label = get<std::string>(e.value("label", json("")), p + ".label");
    ev.side = side_at(need(e, "side", p), p + ".side");
    ev.warhead = get<std::string>(need(e, "warhead", p), p + ".warhead");
    ev.row = row_at(need(e, "row", p), p + ".row");
    ev.expect_refusal = get<std::string>(e.value("expect", json("proved")), p + ".expect") == "refused";
    s.events.push_back(std::move(ev));
  }

  const json challenges = schedule.value("challenges", json::array());
  for (std::size_t k = 0; k < challenges.size(); ++k) {
    const std::string p = "$.challenge_schedule.challenges[" + std::to_string(k) + "]";
    const json& c = challenges.at(k);
    ScenarioChallenge ch;
    ch.at = get<std::uint64_t>(need(c, "at", p), p + ".at");
    ch.by = side_at(need(c, "by", p), p + ".by");
    ch.target = get<std::string>(need(c, "target", p), p + ".target");
    ch.columns = columns_at(need(c, "columns", p), p + ".columns");
    s.challenges.push_back(std::move(ch));
  }

  const json decisions = doc.value("decisions", json::array());
  for (std::size_t k = 0; k < decisions.size(); ++k) {
    const std::string p = "$.decisions[" + std::to_string(k) + "]";
    const json& d = decisions.at(k);
    ScenarioDecision dec;
    dec.at = get<std::uint64_t>(need(d, "at", p), p + ".at");
    dec.by = side_at(need(d, "by", p), p + ".by");
    dec.target = get<std::string>(need(d, "target", p), p + ".target");
    dec.outcome = get<std::string>(need(d, "outcome", p), p + ".outcome");
    s.decisions.push_back(std::move(dec));
  }

  if (doc.contains("fault_plan")) s.faults = parse_fault_plan(doc.at("fault_plan"));
  s.faults.seed = get<std::uint64_t>(doc.value("seed", json(s.faults.seed)), "$.seed");
  return s;
}

Scenario load_scenario_file(const std::string& path, const std::string& profile_dir) {
  return load_scenario(read_file(path), profile_dir);
}

bool TranscriptBundle::clean() const {
  return summary.at("failed_verifications").get<std::size_t>() == 0 &&
         summary.at("invalid_responses").get<std::size_t>() == 0 &&
         summary.at("invalid_exceptions").get<std::size_t>() == 0;
}

TranscriptBundle run_simulation(const Scenario& scenario, const FaultPlan& faults) {
  Transport transport(faults);
  auto [us, ru] = setup(scenario.us, scenario.ru, transport);
  auto party = [&](Side s) -> PartyState& { return s == Side::US ? us : ru; };

  struct Named {
    Side owner;
    std::uint64_t id;
  };
  std::map<std::string, Named> labels;
  for (const PartyState* p : {&us, &ru}) {
    for (const auto& [id, u] : p->updates) {
      const auto it = scenario.initial_labels.find({p->side, u.warhead_id});
      if (it != scenario.initial_labels.end() && u.row < it->second.size() && !it->second[u.row].empty()) {
        labels[it->second[u.row]] = {p->side, id};
      }
    }
  }

  // (step, kind, index) orders the timeline: events, challenges, decisions.
  std::vector<std::tuple<std::uint64_t, int, std::size_t>> timeline;
  for (std::size_t k = 0; k < scenario.events.size(); ++k) timeline.emplace_back(scenario.events[k].at, 0, k);
  for (std::size_t k = 0; k < scenario.challenges.size(); ++k) timeline.emplace_back(scenario.challenges[k].at, 1, k);
  for (std::size_t k = 0; k < scenario.decisions.size(); ++k) timeline.emplace_back(scenario.decisions[k].at, 2, k);
  std::sort(timeline.begin(), timeline.end());

  json refusals = json::array();
  auto resolve = [&](const std::string& label, Side expected_owner) {
    const auto it = labels.find(label);
    if (it == labels.end()) throw Error(Errc::UnknownTarget, "no commitment labelled " + label);
    if (it->second.owner != expected_owner) throw Error(Errc::UnknownTarget, label + " belongs to the acting side");
    return it->second.id;
  };

  for (const auto& [at, kind, k] : timeline) {
    std::string what;
    try {
      if (kind == 0) {
        const ScenarioEvent& ev = scenario.events[k];
        what = "event " + (ev.label.empty() ? std::to_string(k) : ev.label);
        PartyState& owner = party(ev.side);
        const auto latest = owner.latest.find(ev.warhead);
        std::vector<Message> msgs;
        try {
          if (latest == owner.latest.end()) {
            msgs = start_passport(owner, ev.warhead, link_row(ev.row, std::nullopt));
          } else {
            msgs = emit_update(owner, ev.warhead, link_row(ev.row, owner.updates.at(latest->second).commitment));
          }
        } catch (const Error& e) {
          if (!ev.expect_refusal) throw;
          refusals.push_back({{"step", at}, {"label", ev.label}, {"side", side_name(ev.side)}, {"error", e.what()}});
          continue;
        }
        if (ev.expect_refusal) throw Error(Errc::ScenarioError, "row was expected to be refused but proved");
        if (!ev.label.empty()) labels[ev.label] = {ev.side, owner.latest.at(ev.warhead)};
        for (const auto& m : msgs) transport.send(m);
      } else if (kind == 1) {
        const ScenarioChallenge& ch = scenario.challenges[k];
        what = "challenge on " + ch.target;
        const std::uint64_t target = resolve(ch.target, ch.by == Side::US ? Side::RU : Side::US);
        transport.send(issue_challenge(party(ch.by), target, ch.columns, at));
      } else {
        const ScenarioDecision& d = scenario.decisions[k];
        what = "decision on " + d.target;
        record_decision(party(d.by), resolve(d.target, d.by == Side::US ? Side::RU : Side::US), d.outcome);
      }
      transport.run(us, ru);
    } catch (const Error& e) {
      throw Error(Errc::ScenarioError, "step " + std::to_string(at) + " (" + what + "): " + e.what());
    }
  }

  TranscriptBundle out;
  out.us_ledger = us.ledger.text();
  out.ru_ledger = ru.ledger.text();
  out.us_links = us.link_graph;
  out.ru_links = ru.link_graph;
  out.deliveries = transport.delivered();

  json commitments = json::object();
  json links = json::array();
  json exceptions = json::array();
  json audit = json::array();
  std::size_t verified = 0;
  std::size_t failed = 0;
  std::size_t challenges = 0;
  std::size_t invalid_responses = 0;
  std::size_t invalid_exceptions = 0;
  std::size_t normal_proofs = 0;
  std::size_t exception_proofs = 0;
  for (const PartyState* p : {&us, &ru}) {
    const std::string side(side_name(p->side));
    const std::string peer(side_name(p->side == Side::US ? Side::RU : Side::US));
    commitments[side] = p->updates.size();
    for (const auto& [id, u] : p->updates) (u.mode == ProofMode::Normal ? normal_proofs : exception_proofs)++;
    for (const auto& [id, rc] : p->received) (rc.verified ? verified : failed)++;
    for (const auto& [id, t] : p->challenges) {
      ++challenges;
      if (t.response && !t.valid) ++invalid_responses;
    }
    for (const auto& [from, to] : p->link_graph) links.push_back({{"by", side}, {"from", from}, {"to", to}});
    for (const auto& [id, x] : p->exceptions) {
      if (!x.valid) ++invalid_exceptions;
      exceptions.push_back({{"owner", peer},
                            {"id", id},
                            {"valid", x.valid},
                            {"reason", x.reason},
                            {"decision", x.decision ? json(*x.decision) : json(nullptr)}});
    }
    for (const auto& [wid, passport] : p->passports) {
      for (const auto& v : audit_dataset(passport, p->profile)) audit.push_back(violation_json(p->side, wid, v));
    }
  }
  out.summary = {{"scenario", scenario.name},
                 {"seed", faults.seed},
                 {"commitments", commitments},
                 {"normal_proofs", normal_proofs},
                 {"exception_proofs", exception_proofs},
                 {"verified", verified},
                 {"failed_verifications", failed},
                 {"challenges", challenges},
                 {"invalid_responses", invalid_responses},
                 {"invalid_exceptions", invalid_exceptions},
                 {"links", links},
                 {"links_rechecked", recheck_links(us) && recheck_links(ru)},
                 {"exceptions", exceptions},
                 {"refusals", refusals},
                 {"audit", audit}};
  return out;
}

void write_bundle(const TranscriptBundle& bundle, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, dir + ": " + ec.message());
  auto put = [&](const std::string& name, const std::string& content) {
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    out << content;
    if (!out.flush()) throw Error(Errc::Io, "cannot write " + path);
  };
  put("us.jsonl", bundle.us_ledger);
  put("ru.jsonl", bundle.ru_ledger);
  put("summary.json", bundle.summary.dump(2) + "\n");
}

}  // namespace wpass
