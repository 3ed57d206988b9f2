// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <openssl/sha.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../rule_mutations.hpp"
#include "wpass/commitment.hpp"
#include "wpass/proof.hpp"
#include "wpass/simulation.hpp"
#include "wpass/storage.hpp"

using namespace wpass;
using namespace wpass::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. SHA-256 and both GOST parameter sets against the pinned vectors.
Outcome hash_conformance() {
  std::size_t n = 0;
  const std::pair<const char*, std::function<std::string(ByteView)>> sets[] = {
      {"vectors/sha256.txt", [](ByteView m) { return sha256(m).hex(); }},
      {"vectors/gost94_test.txt", [](ByteView m) { return gost3411_94(m, GostParamSet::test()).hex(); }},
      {"vectors/gost94_cryptopro.txt", [](ByteView m) { return gost3411_94(m, GostParamSet::cryptopro()).hex(); }},
  };
  for (const auto& [file, fn] : sets) {
    const auto vectors = load_vectors(fixture(file));
    if (vectors.empty()) return fail(std::string(file) + " is empty");
    for (const auto& v : vectors) {
      if (fn(v.input) != v.digest_hex) return fail(std::string(file) + " mismatch at " + to_hex(v.input));
      ++n;
    }
  }
  return {true, std::to_string(n) + " vectors"};
}

// 2. combined = sha256 || gost, 64 bytes, exact. The SHA half is also
//    checked against OpenSSL.
Outcome combiner_structure() {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const Bytes m = random_bytes(rng, rng() % 300);
    const Digest64 c = combined_hash(m);
    if (c.bytes.size() != 64) return fail("combined digest is not 64 bytes");
    Bytes expect = sha256(m).to_vector();
    append(expect, gost3411_94(m, GostParamSet::cryptopro()));
    if (c.to_vector() != expect) return fail("halves differ at message " + std::to_string(t));
    std::uint8_t ref[SHA256_DIGEST_LENGTH];
    SHA256(m.data(), m.size(), ref);
    if (!std::equal(ref, ref + 32, c.bytes.begin())) return fail("SHA half disagrees with OpenSSL");
  }
  return {true, "1000 messages"};
}

Digest64 oracle_root(std::span<const Digest64> leaves) {
  if (leaves.size() == 1) return leaves[0];
  const std::size_t half = leaves.size() / 2;
  Bytes buf = oracle_root(leaves.first(half)).to_vector();
  append(buf, oracle_root(leaves.subspan(half)));
  return combined_hash(buf);
}

// 3. Array-layout root against recursive halving.
Outcome merkle_oracle() {
  std::mt19937_64 rng(3);
  std::size_t trees = 0;
  for (std::size_t n = 1; n <= 64; n *= 2) {
    for (int t = 0; t < 100; ++t) {
      std::vector<Digest64> leaves(n);
      for (auto& d : leaves) d = Digest64::from(random_bytes(rng, 64));
      if (merkle_root(leaves) != oracle_root(leaves)) return fail("n=" + std::to_string(n));
      ++trees;
    }
  }
  return {true, std::to_string(trees) + " trees, n in {1..64}"};
}

// 4. Leaves 1 and 7 of eight: siblings 2 and 8 are leaves, 10 and 11 are
//    the pair nodes over (3,4) and (5,6).
Outcome inclusion_example() {
  const PrfKey key = test_key(4);
  std::vector<Bytes> values;
  std::vector<Digest64> leaves;
  for (std::uint32_t j = 1; j <= 8; ++j) {
    values.push_back(to_bytes("cell-" + std::to_string(j)));
    leaves.push_back(hide(key, 1, j, values.back()));
  }
  const Digest64 root = merkle_root(leaves);
  const InclusionProof proof = prove_inclusion({1, 7}, LeafVector{leaves, 1});
  std::vector<std::uint32_t> pos;
  for (const auto& e : proof.entries) pos.push_back(e.position);
  if (pos != std::vector<std::uint32_t>{2, 8, 10, 11}) return fail("positions differ");
  if (proof.entries[0].hash != leaves[1] || proof.entries[1].hash != leaves[7]) return fail("sibling leaves");
  if (proof.entries[2].hash != oracle_root(std::span(leaves).subspan(2, 2)) ||
      proof.entries[3].hash != oracle_root(std::span(leaves).subspan(4, 2))) {
    return fail("pair nodes");
  }
  const std::vector<CellOpening> openings = {open_cell(key, 1, 1, values[0]), open_cell(key, 1, 7, values[6])};
  if (!verify_inclusion(proof, openings, root, 1)) return fail("does not verify");
  return {true, "4 nodes at {2,8,10,11}, verifies"};
}

// 5. Every validation bullet maps to a catalogued rule; every mutation
//    triggers its rule.
Outcome rule_coverage() {
  std::ifstream in(fixture("manifest/rule_bullets.json"));
  if (!in) return fail("missing manifest");
  const auto manifest = nlohmann::json::parse(in);
  std::size_t bullets = 0;
  for (const char* side : {"US", "RU"}) {
    for (const auto& b : manifest.at(side)) {
      if (b.at("rule_id").is_null()) continue;
      const std::string id = b.at("rule_id").get<std::string>();
      const CatalogEntry* e = catalog().find(id);
      if (e == nullptr || side_name(e->side) != side) return fail(b.at("bullet").get<std::string>() + " unmapped");
      ++bullets;
    }
  }
  const auto suite = mutation_suite();
  if (suite.size() < 25) return fail("only " + std::to_string(suite.size()) + " mutations");
  for (const auto& m : suite) {
    Pair p = m.base();
    if (!validate_transition({&p.prev, p.next, *m.profile}).empty()) return fail(m.name + ": base not clean");
    m.mutate(p);
    if (ids(validate_transition({&p.prev, p.next, *m.profile})).count(m.expected) == 0) {
      return fail(m.name + " missed " + m.expected);
    }
  }
  return {true, std::to_string(bullets) + " bullets, " + std::to_string(suite.size()) + " mutations"};
}

Scenario scenario(const std::string& name) {
  return load_scenario_file(data_file("scenarios/" + name + ".json"), data_file("profiles"));
}

std::vector<nlohmann::json> records(const std::string& ledger) {
  std::vector<nlohmann::json> out;
  std::istringstream in(ledger);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

// 6. Both narratives, deterministic, each under 10 s.
Outcome scenarios() {
  double worst = 0;
  for (const std::string name : {"pantex-maintenance", "blizzard-exception"}) {
    const Scenario s = scenario(name);
    const auto t0 = Clock::now();
    const TranscriptBundle a = run_simulation(s, s.faults);
    worst = std::max(worst, ms_since(t0));
    const TranscriptBundle b = run_simulation(s, s.faults);
    if (a.us_ledger != b.us_ledger || a.ru_ledger != b.ru_ledger) return fail(name + " not deterministic");
    if (!a.clean()) return fail(name + " not clean");
  }
  if (worst >= 10'000) return fail("run took " + fmt("%.0f ms", worst));

  // Pantex: RU's challenge on C_j (US id 5) opens its location and
  // operation and links it to C_i (id 4).
  const Scenario pantex = scenario("pantex-maintenance");
  const TranscriptBundle p = run_simulation(pantex, pantex.faults);
  if (p.ru_links != std::map<std::uint64_t, std::uint64_t>{{5, 4}} || !p.us_links.empty()) {
    return fail("pantex link graph");
  }
  bool revealed = false;
  for (const auto& r : records(p.ru_ledger)) {
    if (r.at("kind") != "RESPONSE" || r.at("role") != "challenger") continue;
    revealed = r.at("target") == 5 && r.at("valid") == true && r.at("revealed").at("operation") == "SU01" &&
               r.at("revealed").at("location") == "PANTEX-TX";
  }
  if (!revealed) return fail("pantex response does not reveal maintenance at PANTEX-TX");

  // Blizzard: the late arrival C_k is RU's second exchange commitment.
  const Scenario blizzard = scenario("blizzard-exception");
  const TranscriptBundle z = run_simulation(blizzard, blizzard.faults);
  std::vector<nlohmann::json> exchange;
  std::size_t exceptions = 0;
  for (const auto& r : records(z.ru_ledger)) {
    if (r.at("kind") == "COMMIT" && r.at("phase") == "exchange") exchange.push_back(r);
  }
  for (const auto& r : records(z.us_ledger)) exceptions += r.at("kind") == "EXCEPTION";
  if (exchange.size() != 2) return fail("blizzard exchange commitments");
  const auto late = exchange[1].at("id");
  std::size_t normal_late = 0;
  for (const auto* ledger : {&z.ru_ledger, &z.us_ledger}) {
    for (const auto& r : records(*ledger)) {
      if ((r.at("kind") == "COMMIT" || r.at("kind") == "VERIFY") && r.at("id") == late &&
          r.at("mode") == "normal") {
        ++normal_late;
      }
    }
  }
  if (exceptions != 1 || z.summary.at("exception_proofs") != 1) return fail("blizzard exception count");
  if (normal_late != 0) return fail("blizzard late transition has a normal proof");
  return {true, "links {C_j->C_i}, 1 exception, slowest run " + fmt("%.1f ms", worst)};
}

SessionParams session(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SessionParams s;
  s.crs_tag = "acceptance-" + std::to_string(seed);
  for (auto& b : s.attestation_key) b = static_cast<std::uint8_t>(rng());
  return s;
}

const Digest64& ruleset() {
  static const Digest64 id = compute_ruleset_id(catalog(), us_profile(), ru_profile());
  return id;
}

// 7. Mutated witnesses never prove a normal statement; mutated statements
//    never verify.
Outcome soundness() {
  const SessionParams s = session(7);
  std::mt19937_64 rng(7);
  std::size_t witnesses = 0;
  std::size_t statements = 0;
  std::size_t escapes = 0;
  while (witnesses < 1000) {
    const CountryProfile& p = witnesses % 2 == 0 ? us_profile() : ru_profile();
    Witness w;
    w.profile = &p;
    w.key = test_key(rng(), p.side);
    w.prev_index = 1 + rng() % 1000;
    w.new_index = w.prev_index + 1;
    w.prev_row = random_valid_start(rng, p);
    const auto next = random_valid_successor(rng, p, *w.prev_row);
    if (!next) continue;
    w.new_row = link_row(*next, commit(w.key, w.prev_index, *w.prev_row, p));
    const Statement honest = make_statement(ruleset(), w, ProofMode::Normal);
    const ProofObject proof = prove(honest, w, s);
    if (!verify(proof, honest, s)) return fail("honest proof rejected");

    // Drifted witnesses keep the honest statement; rebuilt ones get a fresh
    // statement over a row that breaks a rule.
    Witness bad = w;
    PassportRow& r = bad.new_row;
    const bool rebuild = witnesses % 4 >= 2;
    if (rebuild) {
      switch (rng() % 5) {
        case 0: r.time = w.prev_row->time - 1; break;
        case 1: r.location = "NOWHERE"; break;
        case 2: r.status = "ZZ"; break;
        case 3: r.operation = "XX99"; break;
        case 4: r.personnel.clear(); break;
      }
    } else {
      switch (rng() % 4) {
        case 0: r.time += 1 + rng() % 1000; break;
        case 1: r.personnel.push_back("X" + std::to_string(rng() % 1000)); break;
        case 2: r.secondary_component = r.secondary_component == "Z" ? "Y" : "Z"; break;
        case 3: bad.key = test_key(rng(), p.side); break;
      }
    }
    ++witnesses;
    try {
      const Statement st = rebuild ? make_statement(ruleset(), bad, ProofMode::Normal) : honest;
      prove(st, bad, s);
      ++escapes;
    } catch (const Error&) {
    }

    Statement m = honest;
    const std::size_t i = rng() % (3 * 64);
    const auto delta = static_cast<std::uint8_t>(1 + rng() % 255);
    if (i < 64) {
      m.ruleset_id[i] ^= delta;
    } else if (i < 128 && m.prev_commitment) {
      (*m.prev_commitment)[i - 64] ^= delta;
    } else {
      m.new_commitment[i % 64] ^= delta;
    }
    ++statements;
    escapes += verify(proof, m, s);
  }
  if (escapes != 0) return fail(std::to_string(escapes) + " escapes");
  return {true, std::to_string(witnesses) + " witnesses, " + std::to_string(statements) + " statements, 0 escapes"};
}

// 8. Heavy duplication and reordering leave both ledgers unchanged.
Outcome robustness() {
  for (const std::string name : {"pantex-maintenance", "blizzard-exception"}) {
    const Scenario s = scenario(name);
    const TranscriptBundle clean = run_simulation(s, s.faults);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      FaultPlan f;
      f.duplicate = 0.5;
      f.reorder_window = 64;
      f.seed = seed;
      const TranscriptBundle noisy = run_simulation(s, f);
      if (noisy.us_ledger != clean.us_ledger || noisy.ru_ledger != clean.ru_ledger) {
        return fail(name + " seed " + std::to_string(seed) + " diverged");
      }
    }
  }
  return {true, "2 scenarios x 20 seeds, dup 0.5, reorder window 64"};
}

// 9. 10,000 updates a day for 30 years.
Outcome storage() {
  const StorageEstimate e = estimate_storage(10'000, 30);
  const double rel = std::abs(e.total_gib() - 22.3) / 22.3;
  if (rel > 0.005) return fail(fmt("%.3f GiB", e.total_gib()));
  return {true, std::to_string(e.total_bytes) + " bytes = " + fmt("%.2f GiB", e.total_gib())};
}

// 10. Worst case over 200 updates: commit < 200 ms, inclusion proof
//     < 600 ms, inclusion verification < 100 ms.
Outcome performance() {
  std::mt19937_64 rng(10);
  const CountryProfile& p = us_profile();
  double commit_ms = 0;
  double prove_ms = 0;
  double verify_ms = 0;
  for (std::uint64_t i = 1; i <= 200; ++i) {
    const PrfKey key = test_key(rng(), p.side);
    const PassportRow row = random_valid_start(rng, p);
    auto t0 = Clock::now();
    const Commitment c = commit(key, i, row, p);
    commit_ms = std::max(commit_ms, ms_since(t0));

    const std::vector<Bytes> fields = encode_row(row, p);
    const LeafVector leaves = hide_fields(key, i, fields);
    std::set<std::uint32_t> idx;
    for (std::uint32_t j = 1; j <= kFieldCount; ++j) {
      if (rng() % 3 == 0) idx.insert(j);
    }
    if (idx.empty()) idx.insert(1 + static_cast<std::uint32_t>(i % kFieldCount));
    t0 = Clock::now();
    const InclusionProof proof = prove_inclusion(idx, leaves);
    prove_ms = std::max(prove_ms, ms_since(t0));

    std::vector<CellOpening> openings;
    for (std::uint32_t j : idx) openings.push_back(open_cell(key, i, j, fields[j - 1]));
    t0 = Clock::now();
    const bool ok = verify_inclusion(proof, openings, c.root, i);
    verify_ms = std::max(verify_ms, ms_since(t0));
    if (!ok) return fail("inclusion proof rejected");
  }
  const std::string detail = "max commit " + fmt("%.3f", commit_ms) + " ms, prove " + fmt("%.3f", prove_ms) +
                             " ms, verify " + fmt("%.3f", verify_ms) + " ms";
  if (commit_ms >= 200 || prove_ms >= 600 || verify_ms >= 100) return fail(detail);
  return {true, detail};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"hash conformance", hash_conformance},
      {"combiner structure", combiner_structure},
      {"merkle oracle equivalence", merkle_oracle},
      {"eight-leaf inclusion example", inclusion_example},
      {"rule catalog coverage", rule_coverage},
      {"scenario reproduction", scenarios},
      {"soundness fuzz", soundness},
      {"duplication and reordering", robustness},
      {"storage estimate", storage},
      {"desk-scale performance", performance},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = fail(std::string("threw: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s %2d %-30s %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
