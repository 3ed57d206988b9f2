#include <doctest.h>

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "../rule_mutations.hpp"
#include "wpass/rules.hpp"

using namespace wpass;
using namespace wpass::testing;

TEST_CASE("catalog covers every validation bullet") {
  std::ifstream in(fixture("manifest/rule_bullets.json"));
  REQUIRE(in);
  const auto manifest = nlohmann::json::parse(in);
  std::set<std::string> mapped;
  std::map<std::string, std::string> first_bullet;
  for (const char* side : {"US", "RU"}) {
    for (const auto& b : manifest.at(side)) {
      const std::string bullet = b.at("bullet").get<std::string>();
      if (b.at("rule_id").is_null()) continue;  // the "valid update" definition bullet
      const std::string id = b.at("rule_id").get<std::string>();
      const CatalogEntry* e = catalog().find(id);
      REQUIRE_MESSAGE(e, bullet << " -> " << id);
      CHECK(side_name(e->side) == side);
      first_bullet.emplace(id, bullet);
      CHECK_MESSAGE(e->source == first_bullet.at(id), id);
      mapped.insert(id);
    }
  }
  // Every catalog entry is either a bullet target or an explicitly derived rule.
  for (const auto& e : catalog().entries) {
    CHECK_MESSAGE((mapped.count(e.id) == 1) != (e.source == "derived"), e.id);
  }
}

TEST_CASE("profile rule ids and required ops are catalogued") {
  for (const auto* p : {&us_profile(), &ru_profile(), &table_profile()}) {
    for (const auto& r : p->rules) {
      const CatalogEntry* e = catalog().find(r.id);
      REQUIRE_MESSAGE(e, r.id);
      CHECK(e->side == p->side);
      CHECK(e->severity == Severity::Reject);
    }
    for (const auto& r : p->required_ops) {
      const CatalogEntry* e = catalog().find(r.rule_id);
      REQUIRE_MESSAGE(e, r.rule_id);
      CHECK(e->severity == Severity::Audit);
    }
  }
}

TEST_CASE("ruleset id binds catalog and both profiles") {
  const Digest64 id = compute_ruleset_id(catalog(), us_profile(), ru_profile());
  CHECK(id == compute_ruleset_id(catalog(), us_profile(), ru_profile()));
  RuleCatalog other = catalog();
  other.canonical += " ";
  CHECK(id != compute_ruleset_id(other, us_profile(), ru_profile()));
  CHECK(id != compute_ruleset_id(catalog(), ru_profile(), us_profile()));
}

TEST_CASE("mutation suite bases are clean") {
  for (auto base : {us_sustain, us_custody, us_minot}) {
    const Pair p = base();
    CHECK(validate_transition({&p.prev, p.next, us_profile()}).empty());
    CHECK(validate_transition({nullptr, p.prev, us_profile()}).empty());
  }
  for (auto base : {ru_sustain, ru_rail}) {
    const Pair p = base();
    CHECK(validate_transition({&p.prev, p.next, ru_profile()}).empty());
    CHECK(validate_transition({nullptr, p.prev, ru_profile()}).empty());
  }
}

TEST_CASE("each single-field mutation triggers its rule") {
  const auto suite = mutation_suite();
  CHECK(suite.size() >= 25);
  std::set<std::string> covered;
  for (const auto& m : suite) {
    Pair p = m.base();
    m.mutate(p);
    const auto vs = validate_transition({&p.prev, p.next, *m.profile});
    CHECK_MESSAGE(ids(vs).count(m.expected) == 1, m.name << " expected " << m.expected);
    covered.insert(m.expected);
  }
  // Every reject rule configured in the national profiles has a mutation.
  for (const auto* prof : {&us_profile(), &ru_profile()}) {
    for (const auto& r : prof->rules) CHECK_MESSAGE(covered.count(r.id) == 1, r.id);
  }
}

TEST_CASE("time ordering diverges between sides") {
  Pair us = us_sustain();
  us.next.time = us.prev.time;
  CHECK(ids(validate_transition({&us.prev, us.next, us_profile()})) == std::set<std::string>{"US-TIME-MONO"});
  Pair ru = ru_sustain();
  ru.next.time = ru.prev.time;
  CHECK(validate_transition({&ru.prev, ru.next, ru_profile()}).empty());
}

TEST_CASE("custodian change followed by inventory is accepted") {
  Pair p = us_sustain();
  p.prev.operation = "TC08";
  p.prev.personnel = {"AD1", "AD9"};
  p.next.operation = "SU07";
  CHECK(validate_transition({&p.prev, p.next, us_profile()}).empty());
}

TEST_CASE("inactive statuses exempt the US LLC rule") {
  for (const char* st : {"IH", "IL", "IR"}) {
    Pair p = us_sustain();
    p.prev.status = p.next.status = st;
    p.next.llc1.clear();
    p.next.llc2.clear();
    CHECK(validate_transition({&p.prev, p.next, us_profile()}).empty());
  }
}

TEST_CASE("transport window boundaries are inclusive") {
  const auto& us = us_profile();
  CHECK_FALSE(check_transport_window("TG02", "MNT-BMBR", "MNT-ICBM", 1 * kMinute, us));
  CHECK_FALSE(check_transport_window("TG02", "MNT-BMBR", "MNT-ICBM", 200 * kMinute, us));
  CHECK_FALSE(check_transport_window("TG02", "MNT-BMBR", "MNT-ICBM", 360 * kMinute, us));
  CHECK(check_transport_window("TG02", "MNT-BMBR", "MNT-ICBM", 400 * kMinute, us));
  CHECK(check_transport_window("TA02", "LOG-SW", "MLM-ICBM", 361 * kMinute, us));
  CHECK_FALSE(check_transport_window("TA02", "LOG-SW", "FEW-ICBM", 400 * kMinute, us));
  CHECK(check_transport_window("TA02", "LOG-SW", "FEW-ICBM", 481 * kMinute, us));

  const auto& ru = ru_profile();
  CHECK_FALSE(check_transport_window("TR02", "PATREK", "RTKOMS", 72 * kHour, ru));
  CHECK_FALSE(check_transport_window("TR02", "PATREK", "RTKOMS", 76 * kHour, ru));
  CHECK_FALSE(check_transport_window("TR02", "RTKOMS", "PATREK", 80 * kHour, ru));
  CHECK(check_transport_window("TR02", "PATREK", "RTKOMS", 104 * kHour, ru));
  CHECK(check_transport_window("TR02", "PATREK", "RTKOMS", 72 * kHour - 1, ru));
  CHECK(check_transport_window("TR02", "PATREK", "RTKOMS", 80 * kHour + 1, ru)->rule_id == "RU-TRANSPORT-WINDOW");

  CHECK_FALSE(check_transport_window("TR02", "PATREK", "PATREK", 1'000'000 * kHour, ru));
  CHECK_FALSE(check_transport_window("TG02", "MNT-ICBM", "MNT-ICBM", 0, us));
  CHECK_FALSE(check_transport_window("SU01", "PATREK", "RTKOMS", 0, ru));
  try {
    check_transport_window("TG01", "PATREK", "U44086", kHour, ru);
    FAIL("expected UnknownRoute");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownRoute);
  }
}

TEST_CASE("table example rows validate under the scenario profile") {
  const auto& p = table_profile();
  std::vector<PassportRow> rows = {
      row("2017-11-13T16:00:00Z", "CAD0L", "RP", "R11", {"AD1"}),
      row("2017-11-13T17:00:00Z", "CAD0L", "RI", "R21", {"R63S1"}),
      row("2017-11-14T13:00:00Z", "WR63S", "RI", "R322", {"R63S1"}),
      row("2017-11-15T20:30:00Z", "WR63S", "RI", "R23", {"R631"}),
  };
  CHECK(validate_transition({nullptr, rows[0], p}).empty());
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK_MESSAGE(validate_transition({&rows[k - 1], rows[k], p}).empty(), "row " << k + 1);
  }
  CHECK(audit_dataset(Passport{"W", rows}, p).empty());
}

TEST_CASE("validate_transition is deterministic and sorted") {
  Pair p = us_custody();
  p.next.time = p.prev.time;
  p.next.personnel = {"AD1"};
  p.next.llc1.clear();
  p.next.location = "NOWHERE";
  const auto a = validate_transition({&p.prev, p.next, us_profile()});
  const auto b = validate_transition({&p.prev, p.next, us_profile()});
  CHECK(a == b);
  CHECK(a.size() >= 4);
  CHECK(std::is_sorted(a.begin(), a.end(),
                       [](const Violation& x, const Violation& y) { return x.rule_id < y.rule_id; }));
}

TEST_CASE("audit_dataset required operations") {
  const auto& ru = ru_profile();
  const auto empty = audit_dataset(Passport{}, ru);
  CHECK(empty.size() == 4);
  for (const auto& v : empty) CHECK(v.severity == Severity::Audit);

  Pair base = ru_sustain();
  std::vector<PassportRow> rows{base.prev};
  for (const char* op : {"SU03", "SU04", "SU07"}) {
    PassportRow r = rows.back();
    r.time += kHour;
    r.operation = op;
    rows.push_back(r);
  }
  CHECK(audit_dataset(Passport{"W", rows}, ru).empty());
  rows.pop_back();
  CHECK(ids(audit_dataset(Passport{"W", rows}, ru)) == std::set<std::string>{"RU-REQ-OP-INVENTORY"});

  rows[2].time = rows[1].time - 1;
  const auto mixed = ids(audit_dataset(Passport{"W", rows}, ru));
  CHECK(mixed.count("RU-TIME-MONO") == 1);
  CHECK(mixed.count("RU-REQ-OP-INVENTORY") == 1);
}

TEST_CASE("infer_adjacent reproduces the LLC-removal deduction") {
  const auto& ru = ru_profile();
  const OpenedFields opened = {{Field::Location, "KC1201"},
                               {Field::Llc1, "LLC101001"},
                               {Field::Llc2, ""},
                               {Field::Operation, "SU06"},
                               {Field::PreviousHash, std::string(128, 'a')}};
  const DeducedFacts facts = infer_adjacent(opened, ru);
  const DeducedFacts expected = {
      {FactTarget::Prev, Field::Location, Relation::Equals, "KC1201", "RU-LOC-TRANSPORT"},
      {FactTarget::Prev, Field::Llc1, Relation::Unchanged, "LLC101001", "RU-LLC-REMOVAL-DELTA"},
      {FactTarget::Prev, Field::Llc2, Relation::Nonempty, "", "RU-LLC-REMOVAL-DELTA"},
  };
  CHECK(facts == expected);
}

TEST_CASE("infer_adjacent edge cases") {
  const auto& us = us_profile();
  CHECK(infer_adjacent({}, us).empty());
  CHECK(infer_adjacent({{Field::Operation, "TG02"}, {Field::Location, "MNT-ICBM"}}, us).empty());
  const auto next = infer_adjacent({{Field::Operation, "TC08"}}, us);
  REQUIRE(next.size() == 2);
  CHECK(next[0] == DeducedFact{FactTarget::Next, Field::Operation, Relation::Equals, "SU07", "US-CUSTODIAN-INV"});
  CHECK(next[1] == DeducedFact{FactTarget::Prev, Field::Location, Relation::Unchanged, "", "US-LOC-TRANSPORT"});
  // Chain starts and exception rows license nothing about the previous row.
  CHECK(infer_adjacent({{Field::Operation, "SU01"}, {Field::PreviousHash, ""}}, us).empty());
  CHECK(infer_adjacent({{Field::Operation, "SU01"}, {Field::Exception, "true"}}, us).empty());
}

TEST_CASE("infer_adjacent is sound on generated chains") {
  std::mt19937_64 rng(31);
  std::size_t checked = 0;
  for (const auto* p : {&us_profile(), &ru_profile()}) {
    for (int t = 0; t < 1500; ++t) {
      const PassportRow prev = random_valid_start(rng, *p);
      auto cur = random_valid_successor(rng, *p, prev);
      if (!cur) continue;
      auto next = random_valid_successor(rng, *p, *cur);
      cur->previous_hash = Digest64{};
      const auto fields = encode_row(*cur, *p);
      OpenedFields opened;
      const std::uint32_t mask = static_cast<std::uint32_t>(rng());
      for (std::uint32_t j = 1; j <= kFieldCount; ++j) {
        if (mask >> j & 1 || j == field_index(Field::Operation)) {
          opened[field_at(j)] = render_field(field_at(j), fields[j - 1], *p);
        }
      }
      for (const auto& f : infer_adjacent(opened, *p)) {
        const PassportRow* target = f.target == FactTarget::Prev ? &prev : (next ? &*next : nullptr);
        if (!target) continue;
        const auto tf = encode_row(*target, *p);
        const std::string actual = render_field(f.field, tf[field_index(f.field) - 1], *p);
        const std::string current = render_field(f.field, fields[field_index(f.field) - 1], *p);
        switch (f.relation) {
          case Relation::Equals:
            REQUIRE_MESSAGE(actual == f.value, f.rule_id);
            break;
          case Relation::Unchanged:
            REQUIRE_MESSAGE(actual == current, f.rule_id);
            break;
          case Relation::Nonempty:
            REQUIRE_MESSAGE(!actual.empty(), f.rule_id);
            break;
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}
