// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace wpass {

/// Counts over one or more party ledgers. A commitment, challenge or
/// exception seen from both sides counts once.
struct ReportSummary {
  std::size_t ledgers = 0;
  std::size_t records = 0;
  std::size_t setup_commitments = 0;
  std::size_t commitments = 0;
  std::size_t verifications = 0;
  std::size_t failed_verifications = 0;
  std::size_t challenges = 0;
  std::size_t invalid_responses = 0;
  std::size_t exceptions = 0;
  std::size_t decisions = 0;
  /// "RU:5 -> RU:3": the owner side, then commitment ids.
  std::vector<std::string> links;

  bool operator==(const ReportSummary&) const = default;
};

class TranscriptReader {
 public:
  /// Adds one ledger file's contents. Throws CorruptTranscript naming
  /// `name` and the byte offset of the first bad line: unparsable JSON, a
  /// missing final newline, a record out of sequence, or a broken hash
  /// chain.
  void add(std::string_view text, const std::string& name);

  const ReportSummary& summary() const { return summary_; }

 private:
  bool first_time(const char* what, const std::string& owner, std::uint64_t id);

  ReportSummary summary_;
  std::set<std::tuple<std::string, std::string, std::uint64_t>> seen_;
};

/// `path` is one ledger file or a directory holding us.jsonl and ru.jsonl.
/// Throws Io and CorruptTranscript.
ReportSummary summarize_path(const std::string& path);

std::string render_report(const ReportSummary& summary);

}  // namespace wpass
