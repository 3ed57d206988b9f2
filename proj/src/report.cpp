// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wpass/ledger.hpp"

namespace wpass {

using nlohmann::json;

namespace {

[[noreturn]] void corrupt(const std::string& name, std::size_t offset, const std::string& what) {
  throw Error(Errc::CorruptTranscript, name + " at byte " + std::to_string(offset) + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool TranscriptReader::first_time(const char* what, const std::string& owner, std::uint64_t id) {
  return seen_.emplace(what, owner, id).second;
}

void TranscriptReader::add(std::string_view text, const std::string& name) {
  ReportSummary& summary = summary_;
  ++summary.ledgers;

  struct Bad {
    std::string what;
  };
  std::string side;
  std::string peer;
  Digest64 head{};
  std::size_t offset = 0;
  std::uint64_t expected_n = 1;
  while (offset < text.size()) {
    const std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) corrupt(name, offset, "truncated record without a final newline");
    try {
      json rec = json::parse(text.substr(offset, end - offset));
      if (!rec.is_object()) throw Bad{"record is not an object"};
      if (rec.at("n").get<std::uint64_t>() != expected_n) {
        throw Bad{"record number " + rec.at("n").dump() + ", expected " + std::to_string(expected_n)};
      }
      const std::string chain = rec.at("chain").get<std::string>();
      rec.erase("chain");
      head = chain_step(head, rec);
      if (head.hex() != chain) throw Bad{"hash chain broken"};

      const RecordKind kind = parse_record_kind(rec.at("kind").get<std::string>());
      if (expected_n == 1) {
        if (kind != RecordKind::Setup) throw Bad{"ledger does not start with SETUP"};
        side = rec.at("side").get<std::string>();
        peer = rec.at("peer").get<std::string>();
      }
      ++summary.records;
      switch (kind) {
        case RecordKind::Setup:
          break;
        case RecordKind::Commit:
        case RecordKind::Verify: {
          const bool own = kind == RecordKind::Commit;
          const std::uint64_t id = rec.at("id").get<std::uint64_t>();
          const std::string& owner = own ? side : peer;
          if (!own) {
            ++summary.verifications;
            if (!rec.at("verified").get<bool>()) ++summary.failed_verifications;
          }
          if (first_time("commit", owner, id)) {
            (rec.at("phase").get<std::string>() == "setup" ? summary.setup_commitments : summary.commitments)++;
          }
          if (rec.at("mode").get<std::string>() == "exception" && first_time("exception", owner, id)) {
            ++summary.exceptions;
          }
          break;
        }
        case RecordKind::Challenge:
          if (first_time("challenge", side, rec.at("challenge").get<std::uint64_t>())) ++summary.challenges;
          break;
        case RecordKind::Response: {
          const bool challenger = rec.at("role").get<std::string>() == "challenger";
          const std::uint64_t id = rec.at("challenge").get<std::uint64_t>();
          if (first_time("challenge", challenger ? side : peer, id)) ++summary.challenges;
          if (challenger && !rec.at("valid").get<bool>()) ++summary.invalid_responses;
          break;
        }
        case RecordKind::Link:
          summary.links.push_back(peer + ":" + rec.at("from").dump() + " -> " + peer + ":" + rec.at("to").dump());
          break;
        case RecordKind::Exception:
          if (first_time("exception", peer, rec.at("id").get<std::uint64_t>())) ++summary.exceptions;
          break;
        case RecordKind::Decision:
          ++summary.decisions;
          break;
      }
    } catch (const Bad& b) {
      corrupt(name, offset, b.what);
    } catch (const std::exception& e) {
      corrupt(name, offset, e.what());
    }
    offset = end + 1;
    ++expected_n;
  }
}

ReportSummary summarize_path(const std::string& path) {
  TranscriptReader reader;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    for (const char* file : {"us.jsonl", "ru.jsonl"}) {
      const std::string p = path + "/" + file;
      reader.add(read_file(p), p);
    }
  } else {
    reader.add(read_file(path), path);
  }
  return reader.summary();
}

std::string render_report(const ReportSummary& s) {
  std::ostringstream out;
  out << "ledgers:              " << s.ledgers << "\n"
      << "records:              " << s.records << "\n"
      << "setup commitments:    " << s.setup_commitments << "\n"
      << "commitments:          " << s.commitments << "\n"
      << "verifications:        " << s.verifications << "\n"
      << "failed verifications: " << s.failed_verifications << "\n"
      << "challenges:           " << s.challenges << "\n"
      << "invalid responses:    " << s.invalid_responses << "\n"
      << "links discovered:     " << s.links.size() << "\n"
      << "exceptions:           " << s.exceptions << "\n"
      << "decisions:            " << s.decisions << "\n";
  if (!s.links.empty()) {
    out << "link graph:\n";
    for (const auto& l : s.links) out << "  " << l << "\n";
  }
  return out.str();
}

}  // namespace wpass
