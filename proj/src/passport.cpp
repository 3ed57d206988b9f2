// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/passport.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wpass {

namespace {

constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "time",      "location",  "status",           "secondary_component", "llc1",         "llc2",
    "operation", "personnel", "exception",        "exception_reason",    "previous_hash"};

constexpr std::array<std::string_view, 7> kCategoryNames = {
    "lifecycle",      "custody-transfer", "transport-ground", "transport-rail",
    "transport-air",  "transport-sea",    "sustainment"};

struct KindName {
  RuleKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 19> kKindNames = {{
    {RuleKind::FieldWidths, "field_widths"},
    {RuleKind::TimeMonotonic, "time_monotonic"},
    {RuleKind::TimeAfterStart, "time_after_start"},
    {RuleKind::LocationEnum, "location_enum"},
    {RuleKind::StatusEnum, "status_enum"},
    {RuleKind::OperationEnum, "operation_enum"},
    {RuleKind::PersonnelNonempty, "personnel_nonempty"},
    {RuleKind::PersonnelFirstNonempty, "personnel_first_nonempty"},
    {RuleKind::PersonnelPair, "personnel_pair"},
    {RuleKind::PersonnelDistinct, "personnel_distinct"},
    {RuleKind::LlcPresentUnlessClass, "llc_present_unless_class"},
    {RuleKind::LlcEmptyStatusWhitelist, "llc_empty_status_whitelist"},
    {RuleKind::LlcChangeRequired, "llc_change_required"},
    {RuleKind::LlcSlotEmptyRequired, "llc_slot_empty_required"},
    {RuleKind::LlcRemovalDelta, "llc_removal_delta"},
    {RuleKind::CentralStorageRequired, "central_storage_required"},
    {RuleKind::NextOperation, "next_operation"},
    {RuleKind::TransportWindow, "transport_window"},
    {RuleKind::LocationChangeNeedsTransport, "location_change_needs_transport"},
}};

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(Errc::SchemaError, path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "." + key, "missing");
  return *it;
}

std::string get_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) schema_error(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::string get_string_or(const json& obj, const std::string& key, const std::string& path,
                          std::string fallback) {
  if (!obj.contains(key)) return fallback;
  return get_string(obj, key, path);
}

std::uint64_t get_uint(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_unsigned()) schema_error(path + "." + key, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

const json& get_array(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array()) schema_error(path + "." + key, "expected an array");
  return v;
}

std::vector<std::string> get_strings_or_empty(const json& obj, const std::string& key,
                                              const std::string& path) {
  std::vector<std::string> out;
  if (!obj.contains(key)) return out;
  const json& arr = get_array(obj, key, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      schema_error(path + "." + key + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::uint64_t parse_time_value(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_string()) {
    try {
      return parse_iso8601(v.get<std::string>());
    } catch (const Error& e) {
      schema_error(path, e.what());
    }
  }
  schema_error(path, "expected epoch seconds or an ISO-8601 UTC string");
}

RuleKind parse_rule_kind(const std::string& name, const std::string& path) {
  for (const auto& k : kKindNames) {
    if (k.name == name) return k.kind;
  }
  schema_error(path, "unknown rule kind '" + name + "'");
}

Bytes fixed_width(std::string_view value, std::size_t width, Field field) {
  if (value.size() > width) {
    throw Error(Errc::WidthExceeded, std::string(field_name(field)) + " value '" + std::string(value) +
                                         "' is " + std::to_string(value.size()) + " bytes, limit " +
                                         std::to_string(width));
  }
  if (value.find('\0') != std::string_view::npos) {
    throw Error(Errc::SchemaError, std::string(field_name(field)) + " contains a NUL byte");
  }
  Bytes out(width, 0);
  std::copy(value.begin(), value.end(), out.begin());
  return out;
}

std::string trim_zeros(ByteView bytes) {
  std::size_t end = bytes.size();
  while (end > 0 && bytes[end - 1] == 0) --end;
  return std::string(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(end));
}

[[noreturn]] void unknown_code(Field field, std::string_view value) {
  throw Error(Errc::UnknownCode,
              std::string(field_name(field)) + " code '" + std::string(value) + "' is not in the profile");
}

std::vector<std::string> canonical_personnel(const std::vector<std::string>& entries) {
  std::vector<std::string> out = entries;
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

void expect_size(ByteView bytes, std::size_t size, Field field) {
  if (bytes.size() != size) {
    throw Error(Errc::SchemaError, std::string(field_name(field)) + " encoding is " +
                                       std::to_string(bytes.size()) + " bytes, expected " +
                                       std::to_string(size));
  }
}

// Days since 1970-01-01 for a proleptic Gregorian date (H. Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace

std::string_view field_name(Field f) { return kFieldNames[field_index(f) - 1]; }

Field parse_field(std::string_view name) {
  for (std::uint32_t i = 0; i < kFieldCount; ++i) {
    if (kFieldNames[i] == name) return static_cast<Field>(i + 1);
  }
  throw Error(Errc::SchemaError, "unknown field name '" + std::string(name) + "'");
}

Field field_at(std::uint32_t index) {
  if (index < 1 || index > kFieldCount) {
    throw Error(Errc::IndexOutOfRange, "field index " + std::to_string(index));
  }
  return static_cast<Field>(index);
}

std::string_view category_name(OpCategory c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

OpCategory parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<OpCategory>(i);
  }
  throw Error(Errc::SchemaError, "unknown operation category '" + std::string(name) + "'");
}

bool is_transport(OpCategory c) {
  return c == OpCategory::TransportGround || c == OpCategory::TransportRail ||
         c == OpCategory::TransportAir || c == OpCategory::TransportSea;
}

std::string_view rule_kind_name(RuleKind k) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == k) return entry.name;
  }
  return "unknown";
}

const Location* CountryProfile::find_location(std::string_view code) const {
  for (const auto& l : locations) {
    if (l.code == code) return &l;
  }
  return nullptr;
}

const Status* CountryProfile::find_status(std::string_view code) const {
  for (const auto& s : statuses) {
    if (s.code == code) return &s;
  }
  return nullptr;
}

const Operation* CountryProfile::find_operation(std::string_view code) const {
  for (const auto& o : operations) {
    if (o.code == code) return &o;
  }
  return nullptr;
}

CountryProfile load_profile(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, std::string("profile is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("$", "expected an object");

  CountryProfile p;
  p.canonical = doc.dump();
  p.name = get_string(doc, "name", "$");
  try {
    p.side = parse_side(get_string(doc, "side", "$"));
  } catch (const Error& e) {
    schema_error("$.side", e.what());
  }

  const json& w = require(doc, "widths", "$");
  p.widths.location = get_uint(w, "location", "$.widths");
  p.widths.status = get_uint(w, "status", "$.widths");
  p.widths.component = get_uint(w, "component", "$.widths");
  p.widths.llc = get_uint(w, "llc", "$.widths");
  p.widths.operation = get_uint(w, "operation", "$.widths");
  p.widths.personnel = get_uint(w, "personnel", "$.widths");
  p.widths.personnel_slots = get_uint(w, "personnel_slots", "$.widths");
  p.widths.exception_reason = get_uint(w, "exception_reason", "$.widths");
  if (p.widths.personnel_slots == 0 || p.widths.personnel % p.widths.personnel_slots != 0) {
    schema_error("$.widths.personnel_slots", "must divide the personnel width");
  }

  std::set<std::string> seen;
  const json& locs = get_array(doc, "locations", "$");
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const std::string path = at("$.locations", i);
    Location l{get_string(locs[i], "code", path), get_string(locs[i], "name", path),
               get_string_or(locs[i], "group", path, "")};
    if (l.code.empty() || l.code.size() > p.widths.location) schema_error(path + ".code", "bad width");
    if (!seen.insert("L" + l.code).second) schema_error(path + ".code", "duplicate '" + l.code + "'");
    p.locations.push_back(std::move(l));
  }

  const json& stats = get_array(doc, "statuses", "$");
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const std::string path = at("$.statuses", i);
    Status s{get_string(stats[i], "code", path), get_string(stats[i], "name", path),
             get_string(stats[i], "class", path)};
    if (s.code.empty() || s.code.size() > p.widths.status) schema_error(path + ".code", "bad width");
    if (!seen.insert("S" + s.code).second) schema_error(path + ".code", "duplicate '" + s.code + "'");
    p.statuses.push_back(std::move(s));
  }

  const json& ops = get_array(doc, "operations", "$");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string path = at("$.operations", i);
    Operation o;
    o.code = get_string(ops[i], "code", path);
    o.name = get_string(ops[i], "name", path);
    try {
      o.category = parse_category(get_string(ops[i], "category", path));
    } catch (const Error& e) {
      schema_error(path + ".category", e.what());
    }
    o.role = get_string_or(ops[i], "role", path, "");
    if (o.code.empty() || o.code.size() > p.widths.operation) schema_error(path + ".code", "bad width");
    if (!seen.insert("O" + o.code).second) schema_error(path + ".code", "duplicate '" + o.code + "'");
    p.operations.push_back(std::move(o));
  }

  auto check_location = [&](const std::string& code, const std::string& path) {
    if (!p.find_location(code)) schema_error(path, "unknown location '" + code + "'");
  };
  auto check_operation = [&](const std::string& code, const std::string& path) {
    if (!p.find_operation(code)) schema_error(path, "unknown operation '" + code + "'");
  };
  auto check_bounds = [](std::uint64_t lo, std::uint64_t hi, const std::string& path) {
    if (lo < 1 || lo > hi) {
      throw Error(Errc::InconsistentWindow,
                  path + ": window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] minutes");
    }
  };

  const json& tw = get_array(doc, "transport_windows", "$");
  for (std::size_t i = 0; i < tw.size(); ++i) {
    const std::string path = at("$.transport_windows", i);
    TransportWindow t;
    t.from = get_string(tw[i], "from", path);
    t.to = get_string(tw[i], "to", path);
    check_location(t.from, path + ".from");
    check_location(t.to, path + ".to");
    try {
      t.mode = parse_category(get_string(tw[i], "mode", path));
    } catch (const Error& e) {
      schema_error(path + ".mode", e.what());
    }
    if (!is_transport(t.mode)) schema_error(path + ".mode", "not a transport category");
    const std::uint64_t lo = get_uint(tw[i], "min_minutes", path);
    const std::uint64_t hi = get_uint(tw[i], "max_minutes", path);
    check_bounds(lo, hi, path);
    t.min_minutes = static_cast<std::uint32_t>(lo);
    t.max_minutes = static_cast<std::uint32_t>(hi);
    t.directed = tw[i].value("directed", false);
    p.transport_windows.push_back(std::move(t));
  }

  if (doc.contains("operation_windows")) {
    const json& ow = get_array(doc, "operation_windows", "$");
    for (std::size_t i = 0; i < ow.size(); ++i) {
      const std::string path = at("$.operation_windows", i);
      OperationWindow o;
      o.operations = get_strings_or_empty(ow[i], "operations", path);
      o.locations = get_strings_or_empty(ow[i], "locations", path);
      for (const auto& c : o.operations) check_operation(c, path + ".operations");
      for (const auto& c : o.locations) check_location(c, path + ".locations");
      const std::uint64_t lo = get_uint(ow[i], "min_minutes", path);
      const std::uint64_t hi = get_uint(ow[i], "max_minutes", path);
      check_bounds(lo, hi, path);
      o.min_minutes = static_cast<std::uint32_t>(lo);
      o.max_minutes = static_cast<std::uint32_t>(hi);
      p.operation_windows.push_back(std::move(o));
    }
  }

  p.start_time = parse_time_value(require(doc, "start_time", "$"), "$.start_time");

  const json& req = get_array(doc, "required_ops", "$");
  for (std::size_t i = 0; i < req.size(); ++i) {
    const std::string path = at("$.required_ops", i);
    RequiredOp r{get_string(req[i], "operation", path), get_string(req[i], "rule_id", path)};
    check_operation(r.operation, path + ".operation");
    p.required_ops.push_back(std::move(r));
  }

  std::set<std::string> rule_ids;
  const json& rules = get_array(doc, "rules", "$");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string path = at("$.rules", i);
    const json& r = rules[i];
    RuleSpec spec;
    spec.id = get_string(r, "id", path);
    if (!rule_ids.insert(spec.id).second) schema_error(path + ".id", "duplicate rule id '" + spec.id + "'");
    spec.kind = parse_rule_kind(get_string(r, "kind", path), path + ".kind");
    spec.strict = r.value("strict", false);
    spec.operations = get_strings_or_empty(r, "operations", path);
    if (r.contains("transitions")) {
      const json& t = require(r, "transitions", path);
      if (!t.is_object()) schema_error(path + ".transitions", "expected an object");
      for (const auto& [from, _] : t.items()) {
        check_operation(from, path + ".transitions");
        spec.transitions[from] = get_strings_or_empty(t, from, path + ".transitions");
        for (const auto& c : spec.transitions[from]) check_operation(c, path + ".transitions." + from);
      }
    }
    spec.statuses = get_strings_or_empty(r, "statuses", path);
    spec.status_classes = get_strings_or_empty(r, "status_classes", path);
    for (const auto& c : get_strings_or_empty(r, "categories", path)) {
      try {
        spec.categories.push_back(parse_category(c));
      } catch (const Error& e) {
        schema_error(path + ".categories", e.what());
      }
    }
    for (const auto& c : spec.operations) check_operation(c, path + ".operations");
    for (const auto& c : spec.statuses) {
      if (!p.find_status(c)) schema_error(path + ".statuses", "unknown status '" + c + "'");
    }
    if (spec.kind == RuleKind::CentralStorageRequired) {
      spec.marker_offset = get_uint(r, "marker_offset", path);
      const std::string marker = get_string(r, "marker", path);
      if (marker.size() != 1) schema_error(path + ".marker", "expected one character");
      spec.marker = marker[0];
    }
    p.rules.push_back(std::move(spec));
  }
  return p;
}

CountryProfile load_profile_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read profile '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return load_profile(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

Bytes encode_field(const PassportRow& row, Field field, const CountryProfile& profile) {
  const FieldWidths& w = profile.widths;
  switch (field) {
    case Field::Time: {
      Bytes out;
      append_be64(out, row.time);
      return out;
    }
    case Field::Location:
      if (!profile.find_location(row.location)) unknown_code(field, row.location);
      return fixed_width(row.location, w.location, field);
    case Field::Status:
      if (!profile.find_status(row.status)) unknown_code(field, row.status);
      return fixed_width(row.status, w.status, field);
    case Field::SecondaryComponent:
      return fixed_width(row.secondary_component, w.component, field);
    case Field::Llc1:
      return row.llc1.empty() ? Bytes{} : fixed_width(row.llc1, w.llc, field);
    case Field::Llc2:
      return row.llc2.empty() ? Bytes{} : fixed_width(row.llc2, w.llc, field);
    case Field::Operation:
      if (!profile.find_operation(row.operation)) unknown_code(field, row.operation);
      return fixed_width(row.operation, w.operation, field);
    case Field::Personnel: {
      const auto entries = canonical_personnel(row.personnel);
      if (entries.size() > w.personnel_slots) {
        throw Error(Errc::WidthExceeded, "personnel has " + std::to_string(entries.size()) +
                                             " entries, limit " + std::to_string(w.personnel_slots));
      }
      Bytes out;
      for (std::size_t s = 0; s < w.personnel_slots; ++s) {
        append(out, fixed_width(s < entries.size() ? entries[s] : "", w.personnel_slot(), field));
      }
      return out;
    }
    case Field::Exception:
      return Bytes{static_cast<std::uint8_t>(row.exception ? 1 : 0)};
    case Field::ExceptionReason:
      if (row.exception_reason.size() > w.exception_reason) {
        throw Error(Errc::WidthExceeded, "exception_reason is " +
                                             std::to_string(row.exception_reason.size()) +
                                             " bytes, limit " + std::to_string(w.exception_reason));
      }
      return to_bytes(row.exception_reason);
    case Field::PreviousHash:
      return row.previous_hash ? row.previous_hash->to_vector() : Bytes{};
  }
  throw Error(Errc::IndexOutOfRange, "field");
}

std::vector<Bytes> encode_row(const PassportRow& row, const CountryProfile& profile) {
  std::vector<Bytes> out;
  out.reserve(kFieldCount);
  for (std::uint32_t j = 1; j <= kFieldCount; ++j) out.push_back(encode_field(row, field_at(j), profile));
  return out;
}

PassportRow decode_row(const std::vector<Bytes>& fields, const CountryProfile& profile) {
  if (fields.size() != kFieldCount) {
    throw Error(Errc::SchemaError, "expected " + std::to_string(kFieldCount) + " fields, got " +
                                       std::to_string(fields.size()));
  }
  const FieldWidths& w = profile.widths;
  auto f = [&](Field field) -> const Bytes& { return fields[field_index(field) - 1]; };
  auto llc = [&](Field field) {
    if (f(field).empty()) return std::string();
    expect_size(f(field), w.llc, field);
    return trim_zeros(f(field));
  };

  PassportRow row;
  expect_size(f(Field::Time), 8, Field::Time);
  row.time = load_be64(f(Field::Time));
  expect_size(f(Field::Location), w.location, Field::Location);
  row.location = trim_zeros(f(Field::Location));
  expect_size(f(Field::Status), w.status, Field::Status);
  row.status = trim_zeros(f(Field::Status));
  expect_size(f(Field::SecondaryComponent), w.component, Field::SecondaryComponent);
  row.secondary_component = trim_zeros(f(Field::SecondaryComponent));
  row.llc1 = llc(Field::Llc1);
  row.llc2 = llc(Field::Llc2);
  expect_size(f(Field::Operation), w.operation, Field::Operation);
  row.operation = trim_zeros(f(Field::Operation));

  expect_size(f(Field::Personnel), w.personnel, Field::Personnel);
  const std::size_t slot = w.personnel_slot();
  for (std::size_t s = 0; s < w.personnel_slots; ++s) {
    row.personnel.push_back(trim_zeros(ByteView(f(Field::Personnel)).subspan(s * slot, slot)));
  }
  row.personnel = canonical_personnel(row.personnel);

  expect_size(f(Field::Exception), 1, Field::Exception);
  if (f(Field::Exception)[0] > 1) throw Error(Errc::SchemaError, "exception byte must be 0 or 1");
  row.exception = f(Field::Exception)[0] == 1;
  if (f(Field::ExceptionReason).size() > w.exception_reason) {
    throw Error(Errc::SchemaError, "exception_reason too long");
  }
  row.exception_reason = to_string(f(Field::ExceptionReason));
  if (!f(Field::PreviousHash).empty()) {
    expect_size(f(Field::PreviousHash), Digest64::size(), Field::PreviousHash);
    row.previous_hash = Digest64::from(f(Field::PreviousHash));
  }
  return row;
}

std::string render_field(Field field, ByteView encoded, const CountryProfile& profile) {
  switch (field) {
    case Field::Time:
      return encoded.size() == 8 ? format_iso8601(load_be64(encoded)) : to_hex(encoded);
    case Field::Personnel: {
      const std::size_t slot = profile.widths.personnel_slot();
      if (slot == 0 || encoded.size() != profile.widths.personnel) return to_hex(encoded);
      std::vector<std::string> entries;
      for (std::size_t s = 0; s < profile.widths.personnel_slots; ++s) {
        entries.push_back(trim_zeros(encoded.subspan(s * slot, slot)));
      }
      entries = canonical_personnel(entries);
      std::string out;
      for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? "," : "") + entries[i];
      return out;
    }
    case Field::Exception:
      return encoded.size() == 1 && encoded[0] == 1 ? "true" : "false";
    case Field::ExceptionReason:
      return to_string(encoded);
    case Field::PreviousHash:
      return to_hex(encoded);
    default:
      return trim_zeros(encoded);
  }
}

PassportRow link_row(PassportRow row, const std::optional<Commitment>& prev) {
  if (prev) {
    row.previous_hash = prev->root;
  } else {
    row.previous_hash.reset();
  }
  return row;
}

std::uint64_t parse_iso8601(std::string_view text) {
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail = 0;
  const std::string str(text);
  if (str.size() != 20 ||
      std::sscanf(str.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%c", &y, &mo, &d, &h, &mi, &s, &tail) != 7 ||
      tail != 'Z' || mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 59 || y < 1970) {
    throw Error(Errc::SchemaError, "bad ISO-8601 UTC timestamp '" + str + "'");
  }
  const std::int64_t days = days_from_civil(y, mo, d);
  return static_cast<std::uint64_t>(days) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(std::uint64_t epoch_seconds) {
  const std::int64_t z = static_cast<std::int64_t>(epoch_seconds / 86400) + 719468;
  const std::int64_t era = z / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
  const unsigned secs = static_cast<unsigned>(epoch_seconds % 86400);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02u:%02u:%02uZ", static_cast<long long>(y), m, d,
                secs / 3600, secs / 60 % 60, secs % 60);
  return buf;
}

}  // namespace wpass
