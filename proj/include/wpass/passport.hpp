// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpass/commitment.hpp"
#include "wpass/hash.hpp"

namespace wpass {

// Canonical field order; the value is the 1-based leaf index.
enum class Field : std::uint32_t {
  Time = 1,
  Location,
  Status,
  SecondaryComponent,
  Llc1,
  Llc2,
  Operation,
  Personnel,
  Exception,
  ExceptionReason,
  PreviousHash,
};

inline constexpr std::uint32_t kFieldCount = 11;

inline constexpr std::uint32_t field_index(Field f) { return static_cast<std::uint32_t>(f); }
std::string_view field_name(Field f);
/// Throws SchemaError for unknown names.
Field parse_field(std::string_view name);
/// Throws IndexOutOfRange outside 1..kFieldCount.
Field field_at(std::uint32_t index);

struct PassportRow {
  std::uint64_t time = 0;
  std::string location;
  std::string status;
  std::string secondary_component;
  std::string llc1;
  std::string llc2;
  std::string operation;
  /// Trailing empty entries are not canonical; encoding drops them.
  std::vector<std::string> personnel;
  bool exception = false;
  std::string exception_reason;
  std::optional<Digest64> previous_hash;

  bool operator==(const PassportRow&) const = default;
};

struct Passport {
  std::string warhead_id;
  std::vector<PassportRow> rows;
};

enum class OpCategory {
  Lifecycle,
  CustodyTransfer,
  TransportGround,
  TransportRail,
  TransportAir,
  TransportSea,
  Sustainment,
};

std::string_view category_name(OpCategory c);
OpCategory parse_category(std::string_view name);
bool is_transport(OpCategory c);

struct Location {
  std::string code;
  std::string name;
  std::string group;
};

struct Status {
  std::string code;
  std::string name;
  /// "active" or "inactive" on the US side; RU uses "lifecycle" groupings.
  std::string status_class;
};

struct Operation {
  std::string code;
  std::string name;
  OpCategory category = OpCategory::Lifecycle;
  /// Optional semantic tag consumed by inference, e.g. "llc_removal".
  std::string role;
};

/// Undirected unless `directed` is set. Bounds are inclusive, in minutes.
struct TransportWindow {
  std::string from;
  std::string to;
  OpCategory mode = OpCategory::TransportGround;
  std::uint32_t min_minutes = 0;
  std::uint32_t max_minutes = 0;
  bool directed = false;
};

/// Window that overrides the pair table for specific operations touching
/// specific sites.
struct OperationWindow {
  std::vector<std::string> operations;
  std::vector<std::string> locations;
  std::uint32_t min_minutes = 0;
  std::uint32_t max_minutes = 0;
};

struct FieldWidths {
  std::size_t location = 0;
  std::size_t status = 2;
  std::size_t component = 0;
  std::size_t llc = 9;
  std::size_t operation = 4;
  std::size_t personnel = 0;
  std::size_t personnel_slots = 2;
  std::size_t exception_reason = 256;

  std::size_t personnel_slot() const { return personnel / personnel_slots; }
};

struct RequiredOp {
  std::string operation;
  std::string rule_id;
};

enum class RuleKind {
  FieldWidths,
  TimeMonotonic,
  TimeAfterStart,
  LocationEnum,
  StatusEnum,
  OperationEnum,
  PersonnelNonempty,
  PersonnelFirstNonempty,
  PersonnelPair,
  PersonnelDistinct,
  LlcPresentUnlessClass,
  LlcEmptyStatusWhitelist,
  LlcChangeRequired,
  LlcSlotEmptyRequired,
  LlcRemovalDelta,
  CentralStorageRequired,
  NextOperation,
  TransportWindow,
  LocationChangeNeedsTransport,
};

std::string_view rule_kind_name(RuleKind k);

/// One configured rule. Only the parameters relevant to `kind` are set.
struct RuleSpec {
  std::string id;
  RuleKind kind = RuleKind::FieldWidths;
  bool strict = false;
  std::vector<std::string> operations;
  std::vector<OpCategory> categories;
  /// next_operation: previous operation -> operations allowed to follow it.
  std::map<std::string, std::vector<std::string>> transitions;
  std::vector<std::string> statuses;
  std::vector<std::string> status_classes;
  std::size_t marker_offset = 0;
  char marker = 0;
};

struct CountryProfile {
  std::string name;
  Side side = Side::US;
  FieldWidths widths;
  std::vector<Location> locations;
  std::vector<Status> statuses;
  std::vector<Operation> operations;
  std::vector<TransportWindow> transport_windows;
  std::vector<OperationWindow> operation_windows;
  std::uint64_t start_time = 0;
  std::vector<RequiredOp> required_ops;
  std::vector<RuleSpec> rules;
  /// Canonical serialization of the source document, hashed into the ruleset id.
  std::string canonical;

  const Location* find_location(std::string_view code) const;
  const Status* find_status(std::string_view code) const;
  const Operation* find_operation(std::string_view code) const;
};

/// Parses a profile document. Throws SchemaError naming the offending key,
/// InconsistentWindow when a window has min > max or min < 1.
CountryProfile load_profile(std::string_view json_text);
CountryProfile load_profile_file(const std::string& path);

/// The eleven canonical field encodings, in Field order.
/// Throws WidthExceeded, UnknownCode.
std::vector<Bytes> encode_row(const PassportRow& row, const CountryProfile& profile);
PassportRow decode_row(const std::vector<Bytes>& fields, const CountryProfile& profile);

/// Encoding of one field; the same bytes that encode_row places at its index.
Bytes encode_field(const PassportRow& row, Field field, const CountryProfile& profile);

/// Human-readable rendering of an encoded field, as recorded in transcripts.
std::string render_field(Field field, ByteView encoded, const CountryProfile& profile);

PassportRow link_row(PassportRow row, const std::optional<Commitment>& prev);

/// "YYYY-MM-DDTHH:MM:SSZ" <-> epoch seconds, UTC only.
std::uint64_t parse_iso8601(std::string_view text);
std::string format_iso8601(std::uint64_t epoch_seconds);

}  // namespace wpass
