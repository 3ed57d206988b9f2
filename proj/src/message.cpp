// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/message.hpp"

#include <string>

namespace wpass {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { append_be32(out_, v); }
  void u64(std::uint64_t v) { append_be64(out_, v); }
  void bytes(ByteView b) {
    u32(static_cast<std::uint32_t>(b.size()));
    append(out_, b);
  }
  template <std::size_t N>
  void fixed(const FixedBytes<N>& d) {
    append(out_, d);
  }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    const auto b = take(4);
    return std::uint32_t(b[0]) << 24 | std::uint32_t(b[1]) << 16 | std::uint32_t(b[2]) << 8 | b[3];
  }
  std::uint64_t u64() { return load_be64(take(8)); }
  Bytes bytes() {
    const auto b = take(u32());
    return Bytes(b.begin(), b.end());
  }
  template <std::size_t N>
  FixedBytes<N> fixed() {
    return FixedBytes<N>::from(take(N));
  }
  void finish() const {
    if (pos_ != in_.size()) throw Error(Errc::SchemaError, "trailing bytes after message");
  }

 private:
  ByteView take(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(Errc::SchemaError, "truncated message");
    const auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  ByteView in_;
  std::size_t pos_ = 0;
};

void write_response(Writer& w, const ChallengeResponse& r) {
  w.u64(r.target);
  w.u32(static_cast<std::uint32_t>(r.openings.size()));
  for (const auto& o : r.openings) {
    w.u32(o.field_index);
    w.bytes(o.value);
    w.fixed(o.sigma);
  }
  w.u32(r.inclusion.tree_size);
  w.u32(static_cast<std::uint32_t>(r.inclusion.entries.size()));
  for (const auto& e : r.inclusion.entries) {
    w.u32(e.position);
    w.fixed(e.hash);
  }
}

ChallengeResponse read_response(Reader& r) {
  ChallengeResponse out;
  out.target = r.u64();
  const std::uint32_t openings = r.u32();
  if (openings > kTreeSize) throw Error(Errc::SchemaError, "too many openings");
  for (std::uint32_t i = 0; i < openings; ++i) {
    CellOpening o;
    o.field_index = r.u32();
    o.value = r.bytes();
    o.sigma = r.fixed<64>();
    out.openings.push_back(std::move(o));
  }
  out.inclusion.tree_size = r.u32();
  const std::uint32_t entries = r.u32();
  if (entries > 2 * kTreeSize) throw Error(Errc::SchemaError, "too many proof entries");
  for (std::uint32_t i = 0; i < entries; ++i) {
    ProofNode n;
    n.position = r.u32();
    n.hash = r.fixed<64>();
    out.inclusion.entries.push_back(n);
  }
  return out;
}

ProofMode read_mode(std::uint8_t b) {
  if (b > 1) throw Error(Errc::SchemaError, "unknown proof mode " + std::to_string(b));
  return static_cast<ProofMode>(b);
}

}  // namespace

std::string_view message_kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::Commitment: return "CommitmentMsg";
    case MessageKind::Challenge: return "ChallengeMsg";
    case MessageKind::Response: return "ResponseMsg";
    case MessageKind::Exception: return "ExceptionMsg";
    case MessageKind::Ack: return "Ack";
  }
  return "?";
}

Challenge Challenge::make(std::uint64_t target, std::set<Field> columns) {
  if (columns.empty()) throw Error(Errc::SchemaError, "a challenge needs at least one column");
  return Challenge{target, std::move(columns)};
}

MessageKind Message::kind() const { return static_cast<MessageKind>(payload.index() + 1); }

Bytes serialize_message(const Message& m) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(m.kind()));
  w.u8(static_cast<std::uint8_t>(m.sender));
  w.u64(m.seq);
  if (const auto* p = std::get_if<CommitmentPayload>(&m.payload)) {
    w.u64(p->commitment.commitment_id);
    w.u64(p->commitment.update_index);
    w.fixed(p->commitment.root);
    w.fixed(p->statement.ruleset_id);
    w.u8(p->statement.prev_commitment ? 1 : 0);
    if (p->statement.prev_commitment) w.fixed(*p->statement.prev_commitment);
    w.fixed(p->statement.new_commitment);
    w.u8(static_cast<std::uint8_t>(p->statement.mode));
    w.bytes(serialize_proof(p->proof));
  } else if (const auto* c = std::get_if<ChallengePayload>(&m.payload)) {
    w.u64(c->challenge_id);
    w.u64(c->challenge.target);
    w.u32(static_cast<std::uint32_t>(c->challenge.columns.size()));
    for (Field f : c->challenge.columns) w.u32(field_index(f));
  } else if (const auto* r = std::get_if<ResponsePayload>(&m.payload)) {
    w.u64(r->challenge_id);
    write_response(w, r->response);
  } else if (const auto* e = std::get_if<ExceptionPayload>(&m.payload)) {
    write_response(w, e->disclosure);
  } else {
    w.u64(std::get<AckPayload>(m.payload).acked_seq);
  }
  return w.take();
}

Message parse_message(ByteView bytes) {
  Reader r(bytes);
  const std::uint8_t kind = r.u8();
  const std::uint8_t sender = r.u8();
  if (sender > 1) throw Error(Errc::SchemaError, "unknown sender " + std::to_string(sender));
  Message m;
  m.sender = static_cast<Side>(sender);
  m.seq = r.u64();
  switch (static_cast<MessageKind>(kind)) {
    case MessageKind::Commitment: {
      CommitmentPayload p;
      p.commitment.commitment_id = r.u64();
      p.commitment.update_index = r.u64();
      p.commitment.root = r.fixed<64>();
      p.statement.ruleset_id = r.fixed<64>();
      if (r.u8() != 0) p.statement.prev_commitment = r.fixed<64>();
      p.statement.new_commitment = r.fixed<64>();
      p.statement.mode = read_mode(r.u8());
      p.proof = parse_proof(r.bytes());
      m.payload = std::move(p);
      break;
    }
    case MessageKind::Challenge: {
      ChallengePayload p;
      p.challenge_id = r.u64();
      p.challenge.target = r.u64();
      const std::uint32_t n = r.u32();
      if (n > kFieldCount) throw Error(Errc::SchemaError, "too many challenge columns");
      for (std::uint32_t i = 0; i < n; ++i) p.challenge.columns.insert(field_at(r.u32()));
      m.payload = std::move(p);
      break;
    }
    case MessageKind::Response: {
      ResponsePayload p;
      p.challenge_id = r.u64();
      p.response = read_response(r);
      m.payload = std::move(p);
      break;
    }
    case MessageKind::Exception:
      m.payload = ExceptionPayload{read_response(r)};
      break;
    case MessageKind::Ack:
      m.payload = AckPayload{r.u64()};
      break;
    default:
      throw Error(Errc::SchemaError, "unknown message kind " + std::to_string(kind));
  }
  r.finish();
  return m;
}

}  // namespace wpass
