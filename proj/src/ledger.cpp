// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/ledger.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <utility>

#include "wpass/error.hpp"

namespace wpass {

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "SETUP", "COMMIT", "VERIFY", "CHALLENGE", "RESPONSE", "LINK", "EXCEPTION", "DECISION"};

}  // namespace

std::string_view record_kind_name(RecordKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

RecordKind parse_record_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<RecordKind>(i);
  }
  throw Error(Errc::CorruptTranscript, "unknown record kind '" + std::string(name) + "'");
}

Digest64 chain_step(const Digest64& prev, const nlohmann::json& record_without_chain) {
  Bytes msg(prev.begin(), prev.end());
  append(msg, to_bytes(record_without_chain.dump()));
  return combined_hash(msg);
}

Ledger::Ledger(Ledger&& other) noexcept
    : lines_(std::move(other.lines_)),
      head_(other.head_),
      fd_(std::exchange(other.fd_, -1)),
      fsync_(other.fsync_) {}

Ledger& Ledger::operator=(Ledger&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    lines_ = std::move(other.lines_);
    head_ = other.head_;
    fd_ = std::exchange(other.fd_, -1);
    fsync_ = other.fsync_;
  }
  return *this;
}

Ledger::~Ledger() {
  if (fd_ >= 0) ::close(fd_);
}

void Ledger::attach_file(const std::string& path, bool fsync) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(Errc::Io, path + ": " + std::strerror(errno));
  if (fd_ >= 0) ::close(fd_);
  fd_ = fd;
  fsync_ = fsync;
  for (const auto& line : lines_) write_line(line);
}

void Ledger::write_line(const std::string& line) {
  if (fd_ < 0) return;
  const std::string data = line + "\n";
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::Io, std::string("ledger write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  if (fsync_ && ::fsync(fd_) != 0) {
    throw Error(Errc::Io, std::string("ledger fsync failed: ") + std::strerror(errno));
  }
}

void Ledger::append(RecordKind kind, nlohmann::json body) {
  body["n"] = lines_.size() + 1;
  body["kind"] = record_kind_name(kind);
  head_ = chain_step(head_, body);
  body["chain"] = head_.hex();
  lines_.push_back(body.dump());
  write_line(lines_.back());
}

std::string Ledger::text() const {
  std::string out;
  for (const auto& line : lines_) out += line + "\n";
  return out;
}

}  // namespace wpass
