// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpass/hash.hpp"

namespace wpass {

enum class RecordKind { Setup, Commit, Verify, Challenge, Response, Link, Exception, Decision };

std::string_view record_kind_name(RecordKind k);
RecordKind parse_record_kind(std::string_view name);

/// Append-only JSONL log. Each line is one JSON object with keys "n"
/// (1-based), "kind", the record body, and "chain", where
///   chain_n = combined_hash(chain_{n-1} || line_n without "chain")
/// and chain_0 is 64 zero bytes.
class Ledger {
 public:
  Ledger() = default;
  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;
  Ledger(Ledger&&) noexcept;
  Ledger& operator=(Ledger&&) noexcept;
  ~Ledger();

  /// Mirrors every subsequent append to `path`, truncating it first and
  /// writing the lines already held. With `fsync`, each append is flushed
  /// to stable storage before returning. Throws Io.
  void attach_file(const std::string& path, bool fsync);

  void append(RecordKind kind, nlohmann::json body);

  const std::vector<std::string>& lines() const { return lines_; }
  const Digest64& head() const { return head_; }

  /// The concatenated file contents, one '\n'-terminated line per record.
  std::string text() const;

 private:
  void write_line(const std::string& line);

  std::vector<std::string> lines_;
  Digest64 head_{};
  int fd_ = -1;
  bool fsync_ = false;
};

/// Chain digest of `line` (with its "chain" key removed) after `prev`.
Digest64 chain_step(const Digest64& prev, const nlohmann::json& record_without_chain);

}  // namespace wpass
