// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wpass/protocol.hpp"

namespace wpass {

struct ScenarioEvent {
  std::uint64_t at = 0;
  std::string label;
  Side side = Side::US;
  std::string warhead;
  PassportRow row;
  /// The owner must fail to prove this row; nothing is sent.
  bool expect_refusal = false;
};

struct ScenarioChallenge {
  std::uint64_t at = 0;
  Side by = Side::RU;
  std::string target;
  std::set<Field> columns;
};

struct ScenarioDecision {
  std::uint64_t at = 0;
  Side by = Side::US;
  std::string target;
  std::string outcome;
};

struct Scenario {
  std::string name;
  PartyConfig us;
  PartyConfig ru;
  /// Labels of initial rows by (side, warhead), one per row, "" when unnamed.
  std::map<std::pair<Side, std::string>, std::vector<std::string>> initial_labels;
  std::vector<ScenarioEvent> events;
  std::vector<ScenarioChallenge> challenges;
  std::vector<ScenarioDecision> decisions;
  FaultPlan faults;
};

/// Profiles and the catalog are resolved relative to `profile_dir`.
/// Throws ScenarioError naming the line or JSON path at fault.
Scenario load_scenario(std::string_view json_text, const std::string& profile_dir);
/// Throws Io when the file cannot be read.
Scenario load_scenario_file(const std::string& path, const std::string& profile_dir);

/// Reads drop, duplicate, reorder_window, retransmit_after, max_drops and
/// seed; absent keys keep the values in `base`.
FaultPlan parse_fault_plan(const nlohmann::json& j, FaultPlan base = {});

struct TranscriptBundle {
  std::string us_ledger;
  std::string ru_ledger;
  std::map<std::uint64_t, std::uint64_t> us_links;
  std::map<std::uint64_t, std::uint64_t> ru_links;
  nlohmann::json summary;
  /// Transport deliveries, duplicates and retransmissions included.
  std::uint64_t deliveries = 0;

  /// No failed verification, invalid response or invalid exception.
  bool clean() const;
};

/// Runs setup, then the timeline ordered by step with events before
/// challenges before decisions at equal steps. The network settles after
/// every item. Throws ScenarioError with the step and label at fault.
TranscriptBundle run_simulation(const Scenario& scenario, const FaultPlan& faults);

/// Writes us.jsonl, ru.jsonl and summary.json into `dir`, creating it.
void write_bundle(const TranscriptBundle& bundle, const std::string& dir);

}  // namespace wpass
