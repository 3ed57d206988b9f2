// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/rules.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wpass {

namespace {

bool contains(const std::vector<std::string>& set, std::string_view value) {
  return std::find(set.begin(), set.end(), value) != set.end();
}

std::vector<std::string> nonempty_personnel(const PassportRow& row) {
  std::vector<std::string> out;
  for (const auto& p : row.personnel) {
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::string minutes_text(std::uint64_t seconds) {
  std::ostringstream ss;
  ss << seconds / 60;
  if (seconds % 60) ss << "m" << seconds % 60 << "s";
  else ss << " min";
  return ss.str();
}

std::string transport_rule_id(const CountryProfile& profile) {
  for (const auto& r : profile.rules) {
    if (r.kind == RuleKind::TransportWindow) return r.id;
  }
  return std::string(side_name(profile.side)) + "-TRANSPORT-WINDOW";
}

bool op_in_categories(const CountryProfile& profile, std::string_view op,
                      const std::vector<OpCategory>& cats) {
  const Operation* o = profile.find_operation(op);
  return o && std::find(cats.begin(), cats.end(), o->category) != cats.end();
}

bool is_transport_op(const CountryProfile& profile, std::string_view op) {
  const Operation* o = profile.find_operation(op);
  return o && is_transport(o->category);
}

class Checker {
 public:
  Checker(const TransitionContext& ctx) : ctx_(ctx), row_(ctx.new_row), prev_(ctx.prev_row) {}

  std::vector<Violation> run() {
    for (const RuleSpec& rule : ctx_.profile.rules) apply(rule);
    std::stable_sort(out_.begin(), out_.end(),
                     [](const Violation& a, const Violation& b) { return a.rule_id < b.rule_id; });
    return std::move(out_);
  }

 private:
  void flag(const RuleSpec& rule, std::string message, std::vector<std::string> fields) {
    out_.push_back({rule.id, Severity::Reject, std::move(message), std::move(fields)});
  }

  void apply(const RuleSpec& rule) {
    const CountryProfile& p = ctx_.profile;
    const FieldWidths& w = p.widths;
    switch (rule.kind) {
      case RuleKind::FieldWidths: {
        std::vector<std::string> bad;
        auto over = [&](const std::string& v, std::size_t limit, Field f) {
          if (v.size() > limit) bad.emplace_back(field_name(f));
        };
        over(row_.location, w.location, Field::Location);
        over(row_.status, w.status, Field::Status);
        over(row_.secondary_component, w.component, Field::SecondaryComponent);
        over(row_.llc1, w.llc, Field::Llc1);
        over(row_.llc2, w.llc, Field::Llc2);
        over(row_.operation, w.operation, Field::Operation);
        over(row_.exception_reason, w.exception_reason, Field::ExceptionReason);
        bool personnel_bad = nonempty_personnel(row_).size() > w.personnel_slots ||
                             row_.personnel.size() > w.personnel_slots;
        for (const auto& e : row_.personnel) personnel_bad |= e.size() > w.personnel_slot();
        if (personnel_bad) bad.emplace_back(field_name(Field::Personnel));
        if (!bad.empty()) {
          std::string msg = "field exceeds its width:";
          for (const auto& f : bad) msg += " " + f;
          flag(rule, msg, bad);
        }
        break;
      }
      case RuleKind::TimeMonotonic:
        if (prev_ && (rule.strict ? row_.time <= prev_->time : row_.time < prev_->time)) {
          flag(rule,
               "time " + format_iso8601(row_.time) + (rule.strict ? " is not after " : " is before ") +
                   format_iso8601(prev_->time),
               {"time"});
        }
        break;
      case RuleKind::TimeAfterStart:
        if (row_.time < p.start_time) {
          flag(rule, "time " + format_iso8601(row_.time) + " precedes start " + format_iso8601(p.start_time),
               {"time"});
        }
        break;
      case RuleKind::LocationEnum:
        if (!p.find_location(row_.location)) flag(rule, "unknown location '" + row_.location + "'", {"location"});
        break;
      case RuleKind::StatusEnum:
        if (!p.find_status(row_.status)) flag(rule, "unknown status '" + row_.status + "'", {"status"});
        break;
      case RuleKind::OperationEnum:
        if (!p.find_operation(row_.operation)) {
          flag(rule, "unknown operation '" + row_.operation + "'", {"operation"});
        }
        break;
      case RuleKind::PersonnelNonempty:
        if (nonempty_personnel(row_).empty()) flag(rule, "no personnel recorded", {"personnel"});
        break;
      case RuleKind::PersonnelFirstNonempty:
        if (row_.personnel.empty() || row_.personnel.front().empty()) {
          flag(rule, "first personnel entry is empty", {"personnel"});
        }
        break;
      case RuleKind::PersonnelPair:
        if (op_in_categories(p, row_.operation, rule.categories)) {
          const auto n = nonempty_personnel(row_).size();
          if (n != 2) {
            flag(rule, "operation " + row_.operation + " records " + std::to_string(n) + " personnel, needs 2",
                 {"operation", "personnel"});
          }
        }
        break;
      case RuleKind::PersonnelDistinct:
        if (op_in_categories(p, row_.operation, rule.categories)) {
          const auto entries = nonempty_personnel(row_);
          if (entries.size() >= 2 && entries[0] == entries[1]) {
            flag(rule, "personnel entries repeat '" + entries[0] + "'", {"operation", "personnel"});
          }
        }
        break;
      case RuleKind::LlcPresentUnlessClass: {
        const Status* st = p.find_status(row_.status);
        const bool exempt = st && contains(rule.status_classes, st->status_class);
        if (!exempt && (row_.llc1.empty() || row_.llc2.empty())) {
          flag(rule, "empty LLC slot with status '" + row_.status + "'", {"llc1", "llc2", "status"});
        }
        break;
      }
      case RuleKind::LlcEmptyStatusWhitelist:
        if (row_.llc1.empty() && row_.llc2.empty() && !contains(rule.statuses, row_.status)) {
          flag(rule, "both LLC slots empty with status '" + row_.status + "'", {"llc1", "llc2", "status"});
        }
        break;
      case RuleKind::LlcChangeRequired:
        if (prev_ && contains(rule.operations, row_.operation) && row_.llc1 == prev_->llc1 &&
            row_.llc2 == prev_->llc2) {
          flag(rule, "operation " + row_.operation + " leaves both LLC slots unchanged",
               {"operation", "llc1", "llc2"});
        }
        break;
      case RuleKind::LlcSlotEmptyRequired:
        if (contains(rule.operations, row_.operation) && !row_.llc1.empty() && !row_.llc2.empty()) {
          flag(rule, "operation " + row_.operation + " leaves no LLC slot empty", {"operation", "llc1", "llc2"});
        }
        break;
      case RuleKind::LlcRemovalDelta:
        if (prev_ && contains(rule.operations, row_.operation)) {
          auto slot_ok = [](const std::string& before, const std::string& after) {
            return after == before || (after.empty() && !before.empty());
          };
          const bool emptied = (!prev_->llc1.empty() && row_.llc1.empty()) ||
                               (!prev_->llc2.empty() && row_.llc2.empty());
          if (!slot_ok(prev_->llc1, row_.llc1) || !slot_ok(prev_->llc2, row_.llc2) || !emptied) {
            flag(rule, "operation " + row_.operation + " must only empty LLC slots, at least one",
                 {"operation", "llc1", "llc2"});
          }
        }
        break;
      case RuleKind::CentralStorageRequired:
        if (contains(rule.operations, row_.operation) &&
            (row_.location.size() <= rule.marker_offset || row_.location[rule.marker_offset] != rule.marker)) {
          flag(rule, "operation " + row_.operation + " at non-central location '" + row_.location + "'",
               {"operation", "location"});
        }
        break;
      case RuleKind::NextOperation:
        if (prev_) {
          auto it = rule.transitions.find(prev_->operation);
          if (it != rule.transitions.end() && !contains(it->second, row_.operation)) {
            flag(rule, "operation " + row_.operation + " may not follow " + prev_->operation, {"operation"});
          }
        }
        break;
      case RuleKind::TransportWindow:
        if (prev_ && is_transport_op(p, row_.operation)) {
          const std::uint64_t elapsed = row_.time >= prev_->time ? row_.time - prev_->time : 0;
          try {
            if (auto v = check_transport_window(row_.operation, prev_->location, row_.location, elapsed, p)) {
              v->rule_id = rule.id;
              out_.push_back(std::move(*v));
            }
          } catch (const Error& e) {
            if (e.code() != Errc::UnknownRoute) throw;
            flag(rule, e.what(), {"operation", "location", "time"});
          }
        }
        break;
      case RuleKind::LocationChangeNeedsTransport:
        if (prev_ && row_.location != prev_->location && !is_transport_op(p, row_.operation)) {
          flag(rule,
               "location changed from '" + prev_->location + "' to '" + row_.location + "' under non-transport " +
                   row_.operation,
               {"location", "operation"});
        }
        break;
    }
  }

  const TransitionContext& ctx_;
  const PassportRow& row_;
  const PassportRow* prev_;
  std::vector<Violation> out_;
};

using nlohmann::json;

}  // namespace

std::string_view severity_name(Severity s) { return s == Severity::Reject ? "reject" : "audit"; }

const CatalogEntry* RuleCatalog::find(std::string_view id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

Digest64 RuleCatalog::version_hash() const { return combined_hash(to_bytes(canonical)); }

RuleCatalog load_catalog(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, std::string("catalog is not valid JSON: ") + e.what());
  }
  RuleCatalog cat;
  cat.canonical = doc.dump();
  try {
    cat.version = doc.at("version").get<std::string>();
    for (const auto& r : doc.at("rules")) {
      CatalogEntry e;
      e.id = r.at("id").get<std::string>();
      e.side = parse_side(r.at("side").get<std::string>());
      const std::string sev = r.at("severity").get<std::string>();
      if (sev != "reject" && sev != "audit") throw Error(Errc::SchemaError, "severity '" + sev + "'");
      e.severity = sev == "reject" ? Severity::Reject : Severity::Audit;
      e.source = r.at("source").get<std::string>();
      e.description = r.at("description").get<std::string>();
      e.note = r.value("note", "");
      if (cat.find(e.id)) throw Error(Errc::SchemaError, "duplicate catalog id '" + e.id + "'");
      cat.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("catalog: ") + e.what());
  }
  return cat;
}

RuleCatalog load_catalog_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read catalog '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_catalog(ss.str());
}

Digest64 compute_ruleset_id(const RuleCatalog& catalog, const CountryProfile& us, const CountryProfile& ru) {
  Bytes buf;
  for (const std::string* part : {&catalog.canonical, &us.canonical, &ru.canonical}) {
    append_be32(buf, static_cast<std::uint32_t>(part->size()));
    append(buf, to_bytes(*part));
  }
  return combined_hash(buf);
}

std::vector<Violation> validate_transition(const TransitionContext& ctx) { return Checker(ctx).run(); }

std::optional<Violation> check_transport_window(std::string_view operation, std::string_view origin,
                                                std::string_view destination, std::uint64_t elapsed_seconds,
                                                const CountryProfile& profile) {
  const Operation* op = profile.find_operation(operation);
  if (!op || !is_transport(op->category)) return std::nullopt;
  if (origin == destination) return std::nullopt;

  std::optional<std::pair<std::uint32_t, std::uint32_t>> window;
  for (const auto& ow : profile.operation_windows) {
    if (contains(ow.operations, operation) && (contains(ow.locations, origin) || contains(ow.locations, destination))) {
      window = {ow.min_minutes, ow.max_minutes};
      break;
    }
  }
  if (!window) {
    for (const auto& tw : profile.transport_windows) {
      if (tw.mode != op->category) continue;
      const bool forward = tw.from == origin && tw.to == destination;
      const bool backward = !tw.directed && tw.from == destination && tw.to == origin;
      if (forward || backward) {
        window = {tw.min_minutes, tw.max_minutes};
        break;
      }
    }
  }
  if (!window) {
    throw Error(Errc::UnknownRoute, "no " + std::string(category_name(op->category)) + " window for " +
                                        std::string(origin) + " -> " + std::string(destination));
  }
  const std::uint64_t lo = std::uint64_t(window->first) * 60;
  const std::uint64_t hi = std::uint64_t(window->second) * 60;
  if (elapsed_seconds >= lo && elapsed_seconds <= hi) return std::nullopt;
  return Violation{transport_rule_id(profile), Severity::Reject,
                   std::string(operation) + " " + std::string(origin) + " -> " + std::string(destination) +
                       " took " + minutes_text(elapsed_seconds) + ", allowed [" + std::to_string(window->first) +
                       ", " + std::to_string(window->second) + "] min",
                   {"operation", "location", "time"}};
}

std::vector<Violation> audit_dataset(const Passport& passport, const CountryProfile& profile) {
  std::vector<Violation> out;
  for (const auto& req : profile.required_ops) {
    const bool present = std::any_of(passport.rows.begin(), passport.rows.end(),
                                     [&](const PassportRow& r) { return r.operation == req.operation; });
    if (!present) {
      out.push_back({req.rule_id, Severity::Audit, "operation " + req.operation + " never appears", {"operation"}});
    }
  }
  for (std::size_t k = 0; k < passport.rows.size(); ++k) {
    const PassportRow* prev = k ? &passport.rows[k - 1] : nullptr;
    auto vs = validate_transition({prev, passport.rows[k], profile});
    for (auto& v : vs) {
      v.message = "row " + std::to_string(k + 1) + ": " + v.message;
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::string_view fact_target_name(FactTarget t) { return t == FactTarget::Prev ? "prev" : "next"; }

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::Equals:
      return "equals";
    case Relation::Nonempty:
      return "nonempty";
    case Relation::Unchanged:
      return "unchanged";
  }
  return "unknown";
}

DeducedFacts infer_adjacent(const OpenedFields& opened, const CountryProfile& profile) {
  DeducedFacts facts;
  auto get = [&](Field f) -> const std::string* {
    auto it = opened.find(f);
    return it == opened.end() ? nullptr : &it->second;
  };
  const std::string* op = get(Field::Operation);
  if (!op) return facts;
  if (const std::string* ex = get(Field::Exception); ex && *ex == "true") return facts;
  const Operation* operation = profile.find_operation(*op);
  if (!operation) return facts;
  const std::string* prev_hash = get(Field::PreviousHash);
  const bool has_prev = !(prev_hash && prev_hash->empty());

  for (const RuleSpec& rule : profile.rules) {
    switch (rule.kind) {
      case RuleKind::LocationChangeNeedsTransport:
        if (has_prev && !is_transport(operation->category)) {
          if (const std::string* loc = get(Field::Location)) {
            facts.push_back({FactTarget::Prev, Field::Location, Relation::Equals, *loc, rule.id});
          } else {
            facts.push_back({FactTarget::Prev, Field::Location, Relation::Unchanged, "", rule.id});
          }
        }
        break;
      case RuleKind::LlcRemovalDelta: {
        const std::string* l1 = get(Field::Llc1);
        const std::string* l2 = get(Field::Llc2);
        if (has_prev && contains(rule.operations, *op) && l1 && l2 && (l1->empty() != l2->empty())) {
          const bool first_empty = l1->empty();
          const Field kept = first_empty ? Field::Llc2 : Field::Llc1;
          const Field emptied = first_empty ? Field::Llc1 : Field::Llc2;
          facts.push_back({FactTarget::Prev, kept, Relation::Unchanged, first_empty ? *l2 : *l1, rule.id});
          facts.push_back({FactTarget::Prev, emptied, Relation::Nonempty, "", rule.id});
        }
        break;
      }
      case RuleKind::NextOperation: {
        auto it = rule.transitions.find(*op);
        if (it != rule.transitions.end() && it->second.size() == 1) {
          facts.push_back({FactTarget::Next, Field::Operation, Relation::Equals, it->second.front(), rule.id});
        }
        break;
      }
      default:
        break;
    }
  }
  return facts;
}

}  // namespace wpass
