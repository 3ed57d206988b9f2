// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Exit status: 0 success, 1 verification or compliance failure, 2 usage or
// I/O error.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wpass/hash.hpp"
#include "wpass/report.hpp"
#include "wpass/simulation.hpp"
#include "wpass/storage.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string profile_dir;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wpass::Error(wpass::Errc::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flag, then WPASS_PROFILE_DIR, then the profiles directory beside the
// scenario's own directory.
std::string resolve_profile_dir(const Globals& g, const std::string& scenario_path) {
  if (!g.profile_dir.empty()) return g.profile_dir;
  if (const char* env = std::getenv("WPASS_PROFILE_DIR"); env != nullptr && *env != '\0') return env;
  const auto dir = std::filesystem::path(scenario_path).parent_path();
  return (dir.empty() ? std::filesystem::path("..") : dir / "..").append("profiles").string();
}

int cmd_run(const Globals& g, const std::string& scenario_path, const std::string& faults_path) {
  const wpass::Scenario scenario = wpass::load_scenario_file(scenario_path, resolve_profile_dir(g, scenario_path));
  wpass::FaultPlan faults = scenario.faults;
  if (!faults_path.empty()) faults = wpass::parse_fault_plan(nlohmann::json::parse(read_file(faults_path)), faults);
  if (g.seed) faults.seed = *g.seed;

  const wpass::TranscriptBundle bundle = wpass::run_simulation(scenario, faults);
  const std::string out_dir =
      g.out_dir.empty() ? "wpass-out/" + (scenario.name.empty() ? std::string("run") : scenario.name) : g.out_dir;
  wpass::write_bundle(bundle, out_dir);

  const auto& s = bundle.summary;
  std::cout << "scenario:             " << s.at("scenario").get<std::string>() << "\n"
            << "seed:                 " << faults.seed << "\n"
            << "normal proofs:        " << s.at("normal_proofs") << "\n"
            << "exception proofs:     " << s.at("exception_proofs") << "\n"
            << "verified:             " << s.at("verified") << "\n"
            << "failed verifications: " << s.at("failed_verifications") << "\n"
            << "challenges:           " << s.at("challenges") << "\n"
            << "invalid responses:    " << s.at("invalid_responses") << "\n"
            << "links:                " << s.at("links").size() << "\n"
            << "exceptions:           " << s.at("exceptions").size() << "\n"
            << "transcript:           " << out_dir << "\n";
  return bundle.clean() ? kOk : kFailed;
}

int cmd_hash(const std::string& algorithm, const std::string& hex, const std::string& file,
             const std::string& paramset) {
  const wpass::Bytes input = file.empty() ? wpass::from_hex(hex) : wpass::to_bytes(read_file(file));
  const wpass::GostParamSet& params =
      paramset == "test" ? wpass::GostParamSet::test() : wpass::GostParamSet::cryptopro();
  if (algorithm == "sha256") {
    std::cout << wpass::sha256(input).hex() << "\n";
  } else if (algorithm == "gost94") {
    std::cout << wpass::gost3411_94(input, params).hex() << "\n";
  } else {
    std::cout << wpass::combined_hash(input, params).hex() << "\n";
  }
  return kOk;
}

int cmd_estimate(std::uint64_t per_day, std::uint64_t years, std::uint64_t commitment, std::uint64_t response) {
  const wpass::StorageEstimate e = wpass::estimate_storage(per_day, years, commitment, response);
  char gib[32];
  std::snprintf(gib, sizeof gib, "%.2f", e.total_gib());
  std::cout << "updates_per_day:  " << e.updates_per_day << "\n"
            << "years:            " << e.years << "\n"
            << "bytes_per_update: " << e.commitment_bytes + e.response_bytes << " (commitment " << e.commitment_bytes
            << " + response " << e.response_bytes << ")\n"
            << "total_bytes:      " << e.total_bytes << "\n"
            << "total_gib:        " << gib << "\n";
  return kOk;
}

int cmd_report(const std::string& path) {
  std::cout << wpass::render_report(wpass::summarize_path(path));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warhead passport commitment toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--profile-dir", g.profile_dir, "Directory holding the country profiles (env WPASS_PROFILE_DIR)");
  auto* seed_opt = app.add_option("--seed", seed, "Fault-plan seed, overriding the scenario's");
  app.add_option("--out-dir", g.out_dir, "Where run writes us.jsonl, ru.jsonl and summary.json");

  std::string scenario_path;
  std::string faults_path;
  auto* run = app.add_subcommand("run", "Run a scenario and write its transcript bundle");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--faults", faults_path, "Fault plan JSON, overriding the scenario's");

  std::string algorithm;
  std::string hex;
  std::string file;
  std::string paramset = "cryptopro";
  auto* hash = app.add_subcommand("hash", "Print a digest in lowercase hex");
  hash->add_option("algorithm", algorithm, "sha256, gost94 or combined")
      ->required()
      ->check(CLI::IsMember({"sha256", "gost94", "combined"}));
  auto* hex_opt = hash->add_option("--hex", hex, "Input bytes as hex");
  auto* file_opt = hash->add_option("--file", file, "Input file");
  hex_opt->excludes(file_opt);
  hash->add_option("--paramset", paramset, "GOST S-box set")->check(CLI::IsMember({"test", "cryptopro"}));

  std::uint64_t per_day = 0;
  std::uint64_t years = 0;
  std::uint64_t commitment_bytes = 79;
  std::uint64_t response_bytes = 140;
  auto* estimate = app.add_subcommand("estimate-storage", "Storage for a stream of updates and responses");
  estimate->add_option("updates_per_day", per_day)->required();
  estimate->add_option("years", years)->required();
  estimate->add_option("--commitment-bytes", commitment_bytes, "Bytes per stored commitment");
  estimate->add_option("--response-bytes", response_bytes, "Bytes per stored challenge response");

  std::string transcript;
  auto* report = app.add_subcommand("report", "Summarize a ledger file or transcript directory");
  report->add_option("transcript", transcript)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed;
  if (*hash && hex_opt->count() == 0 && file_opt->count() == 0) {
    std::cerr << "hash: give --hex or --file\n";
    return kUsage;
  }

  try {
    if (*run) return cmd_run(g, scenario_path, faults_path);
    if (*hash) return cmd_hash(algorithm, hex, file, paramset);
    if (*estimate) return cmd_estimate(per_day, years, commitment_bytes, response_bytes);
    return cmd_report(transcript);
  } catch (const wpass::Error& e) {
    std::cerr << "wpass: " << e.what() << "\n";
    return e.code() == wpass::Errc::CorruptTranscript ? kFailed : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "wpass: " << e.what() << "\n";
    return kUsage;
  }
}
