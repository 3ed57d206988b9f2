#include <doctest.h>

#include <random>

#include "../row_gen.hpp"
#include "wpass/proof.hpp"

using namespace wpass;
using namespace wpass::testing;

namespace {

SessionParams session(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SessionParams s;
  s.crs_tag = "test-session-" + std::to_string(seed);
  for (auto& b : s.attestation_key) b = static_cast<std::uint8_t>(rng());
  return s;
}

const Digest64& ruleset() {
  static const Digest64 id = combined_hash(to_bytes("test ruleset"));
  return id;
}

PassportRow base_row(std::string_view when, std::string loc, std::string status, std::string op,
                     std::vector<std::string> personnel) {
  PassportRow r;
  r.time = parse_iso8601(when);
  r.location = std::move(loc);
  r.status = std::move(status);
  r.secondary_component = "S01001";
  r.llc1 = "LLC101001";
  r.llc2 = "LLC201001";
  r.operation = std::move(op);
  r.personnel = std::move(personnel);
  return r;
}

// Inactive-hedge inventory at Pantex followed by periodic maintenance.
Witness maintenance_witness() {
  const auto& p = us_profile();
  Witness w;
  w.key = test_key(100);
  w.profile = &p;
  w.prev_index = 1;
  w.new_index = 2;
  w.prev_row = base_row("2018-03-01T08:00:00Z", "PANTEX-TX", "IH", "SU07", {"PX1"});
  w.new_row = base_row("2018-03-02T15:00:00Z", "PANTEX-TX", "IH", "SU01", {"PX2"});
  w.new_row = link_row(w.new_row, commit(w.key, 1, *w.prev_row, p));
  return w;
}

Witness blizzard_witness(std::uint64_t hours) {
  const auto& p = ru_profile();
  Witness w;
  w.key = test_key(200, Side::RU);
  w.profile = &p;
  w.prev_index = 4;
  w.new_index = 5;
  w.prev_row = base_row("2018-01-10T06:00:00Z", "PATREK", "PR", "TC01", {"T1", "R1"});
  w.prev_row->llc1.clear();
  w.prev_row->llc2.clear();
  w.new_row = *w.prev_row;
  w.new_row.time += hours * 3600;
  w.new_row.location = "RTKOMS";
  w.new_row.operation = "TR02";
  w.new_row.personnel = {"R1"};
  w.new_row = link_row(w.new_row, commit(w.key, 4, *w.prev_row, p));
  return w;
}

template <class F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;
}

}  // namespace

TEST_CASE("valid maintenance transition proves and verifies") {
  const Witness w = maintenance_witness();
  const SessionParams s = session(1);
  const Statement st = make_statement(ruleset(), w, ProofMode::Normal);
  const ProofObject proof = prove(st, w, s);
  CHECK(verify(proof, st, s));
  CHECK(proof.mode == ProofMode::Normal);
  CHECK(serialize_proof(proof).size() == kProofSize);
  CHECK(kProofSize <= 160);
  CHECK(parse_proof(serialize_proof(proof)) == proof);
}

TEST_CASE("chain start statements have no predecessor") {
  Witness w = maintenance_witness();
  w.new_row = *w.prev_row;
  w.new_index = w.prev_index;
  w.prev_row.reset();
  const SessionParams s = session(2);
  const Statement st = make_statement(ruleset(), w, ProofMode::Normal);
  CHECK_FALSE(st.prev_commitment.has_value());
  CHECK(verify(prove(st, w, s), st, s));
  // A predecessor slot in the statement without one in the witness is a mismatch.
  Statement forged = st;
  forged.prev_commitment = Digest64{};
  CHECK(error_of([&] { prove(forged, w, s); }) == Errc::CommitmentMismatch);
}

TEST_CASE("blizzard arrival proves only in exception mode") {
  const SessionParams s = session(3);
  Witness w = blizzard_witness(104);
  w.new_row.exception = true;
  w.new_row.exception_reason = "Rail line blocked by blizzard; arrival delayed 24 h.";
  const Statement normal = make_statement(ruleset(), w, ProofMode::Normal);
  try {
    prove(normal, w, s);
    FAIL("expected RuleViolations");
  } catch (const RuleViolationsError& e) {
    CHECK(e.code() == Errc::RuleViolations);
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].rule_id == "RU-TRANSPORT-WINDOW");
  }
  const Statement exc = make_statement(ruleset(), w, ProofMode::Exception);
  const ProofObject proof = prove(exc, w, s);
  CHECK(verify(proof, exc, s));
  CHECK_FALSE(verify(proof, normal, s));
  CHECK(required_exception_openings(exc) == std::set<std::uint32_t>{9, 10});
  CHECK(required_exception_openings(exc) ==
        std::set<std::uint32_t>{field_index(Field::Exception), field_index(Field::ExceptionReason)});
  CHECK(error_of([&] { required_exception_openings(normal); }) == Errc::NotException);

  // The on-time journey proves normally.
  const Witness on_time = blizzard_witness(76);
  CHECK(verify(prove(make_statement(ruleset(), on_time, ProofMode::Normal), on_time, s),
               make_statement(ruleset(), on_time, ProofMode::Normal), s));
}

TEST_CASE("exception mode requires flag and reason") {
  const SessionParams s = session(4);
  Witness w = blizzard_witness(104);
  CHECK(error_of([&] { prove(make_statement(ruleset(), w, ProofMode::Exception), w, s); }) ==
        Errc::MalformedException);
  w = blizzard_witness(104);
  w.new_row.exception = true;
  CHECK(error_of([&] { prove(make_statement(ruleset(), w, ProofMode::Exception), w, s); }) ==
        Errc::MalformedException);
  w = blizzard_witness(76);
  w.new_row.exception = true;
  w.new_row.exception_reason = "precautionary";
  CHECK(error_of([&] { prove(make_statement(ruleset(), w, ProofMode::Normal), w, s); }) ==
        Errc::MalformedException);
}

TEST_CASE("commitment mismatches are refused") {
  const SessionParams s = session(5);
  const Witness w = maintenance_witness();
  const Statement st = make_statement(ruleset(), w, ProofMode::Normal);
  Witness other = w;
  other.new_row.personnel = {"PX3"};
  CHECK(error_of([&] { prove(st, other, s); }) == Errc::CommitmentMismatch);
  other = w;
  other.key = test_key(101);
  CHECK(error_of([&] { prove(st, other, s); }) == Errc::CommitmentMismatch);
  other = w;
  other.prev_row->time -= 1;
  CHECK(error_of([&] { prove(make_statement(ruleset(), other, ProofMode::Normal), other, s); }) ==
        Errc::CommitmentMismatch);
}

TEST_CASE("verify rejects foreign sessions and altered statements") {
  const Witness w = maintenance_witness();
  const SessionParams s = session(6);
  const Statement st = make_statement(ruleset(), w, ProofMode::Normal);
  const ProofObject proof = prove(st, w, s);
  for (std::uint64_t seed = 100; seed < 200; ++seed) CHECK_FALSE(verify(proof, st, session(seed)));
  SessionParams tag = s;
  tag.crs_tag += "x";
  CHECK_FALSE(verify(proof, st, tag));

  Statement altered = st;
  altered.new_commitment[0] ^= 1;
  CHECK_FALSE(verify(proof, altered, s));
  ProofObject forged = proof;
  forged.attestation[31] ^= 0x80;
  CHECK_FALSE(verify(forged, st, s));
}

TEST_CASE("every single-byte statement mutation fails verification") {
  const Witness w = maintenance_witness();
  const SessionParams s = session(7);
  const Statement st = make_statement(ruleset(), w, ProofMode::Normal);
  const ProofObject proof = prove(st, w, s);
  std::mt19937_64 rng(7);
  std::size_t tried = 0;
  for (int round = 0; round < 6; ++round) {
    for (std::size_t i = 0; i < 3 * 64 + 1; ++i) {
      Statement m = st;
      const auto delta = static_cast<std::uint8_t>(1 + rng() % 255);
      if (i < 64) {
        m.ruleset_id[i] ^= delta;
      } else if (i < 128) {
        (*m.prev_commitment)[i - 64] ^= delta;
      } else if (i < 192) {
        m.new_commitment[i - 128] ^= delta;
      } else {
        m.mode = ProofMode::Exception;
      }
      CHECK_FALSE(verify(proof, m, s));
      ++tried;
    }
  }
  Statement dropped = st;
  dropped.prev_commitment.reset();
  CHECK_FALSE(verify(proof, dropped, s));
  CHECK(tried >= 1000);
}

TEST_CASE("fuzzed witnesses never yield a normal proof") {
  const SessionParams s = session(8);
  std::mt19937_64 rng(8);
  std::size_t rejected = 0;
  for (const auto* p : {&us_profile(), &ru_profile()}) {
    for (int t = 0; t < 500; ++t) {
      Witness w;
      w.profile = p;
      w.key = test_key(rng(), p->side);
      w.prev_index = 1 + rng() % 1000;
      w.new_index = w.prev_index + 1;
      w.prev_row = random_valid_start(rng, *p);
      auto next = random_valid_successor(rng, *p, *w.prev_row);
      if (!next) {
        --t;
        continue;
      }
      w.new_row = link_row(*next, commit(w.key, w.prev_index, *w.prev_row, *p));
      const Statement honest = make_statement(ruleset(), w, ProofMode::Normal);
      REQUIRE(verify(prove(honest, w, s), honest, s));

      // Either the witness drifts from the published statement, or a field
      // is changed and the statement is rebuilt over the rule-breaking row.
      Witness bad = w;
      PassportRow& r = bad.new_row;
      const bool rebuild = t % 2 == 1;
      switch (rng() % 8) {
        case 0: r.time = rebuild ? w.prev_row->time - 1 : r.time + 1; break;
        case 1: r.location = rebuild ? "BADLOC" : w.prev_row->location == "PATREK" ? "PALESN" : "PATREK"; break;
        case 2: r.status = "ZZ"; break;
        case 3: r.operation = rebuild ? "XX99" : p->operations[rng() % p->operations.size()].code; break;
        case 4: r.personnel = {}; break;
        case 5: r.llc1.clear(); r.llc2.clear(); r.status = p->side == Side::US ? "AR" : "AC"; break;
        case 6: r.time = p->start_time - 1; bad.prev_row->time = p->start_time - 2; break;
        case 7: bad.key = test_key(rng(), p->side); break;
      }
      if (r == w.new_row && bad.prev_row == w.prev_row && bad.key.key == w.key.key) {
        --t;
        continue;
      }
      const Statement st = rebuild ? Statement{} : honest;
      try {
        const Statement use = rebuild ? make_statement(ruleset(), bad, ProofMode::Normal) : st;
        const ProofObject proof = prove(use, bad, s);
        // A rebuilt statement may legitimately prove if the mutation left the row valid.
        REQUIRE_MESSAGE(rebuild, "drifted witness proved");
        REQUIRE(validate_transition({&*bad.prev_row, bad.new_row, *p}).empty());
        (void)proof;
      } catch (const Error& e) {
        CHECK((e.code() == Errc::CommitmentMismatch || e.code() == Errc::RuleViolations ||
               e.code() == Errc::UnknownCode));
        ++rejected;
      }
    }
  }
  CHECK(rejected >= 950);
}
