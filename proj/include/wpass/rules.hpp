// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpass/passport.hpp"

namespace wpass {

enum class Severity { Reject, Audit };

std::string_view severity_name(Severity s);

struct Violation {
  std::string rule_id;
  Severity severity = Severity::Reject;
  std::string message;
  std::vector<std::string> field_refs;

  bool operator==(const Violation&) const = default;
};

struct CatalogEntry {
  std::string id;
  Side side = Side::US;
  Severity severity = Severity::Reject;
  /// Validation bullet reference such as "us#5.a", or "derived".
  std::string source;
  std::string description;
  std::string note;
};

struct RuleCatalog {
  std::string version;
  std::vector<CatalogEntry> entries;
  std::string canonical;

  const CatalogEntry* find(std::string_view id) const;
  /// combined_hash of the canonical catalog document.
  Digest64 version_hash() const;
};

RuleCatalog load_catalog(std::string_view json_text);
RuleCatalog load_catalog_file(const std::string& path);

/// Binds the catalog and both national profiles; both parties compute the
/// same value from the same documents.
Digest64 compute_ruleset_id(const RuleCatalog& catalog, const CountryProfile& us,
                            const CountryProfile& ru);

struct TransitionContext {
  const PassportRow* prev_row = nullptr;
  const PassportRow& new_row;
  const CountryProfile& profile;
};

/// Violations of every configured pairwise rule, sorted by rule_id.
std::vector<Violation> validate_transition(const TransitionContext& ctx);

/// Bounds are inclusive. Returns nullopt for non-transport operations and for
/// origin == destination. Throws UnknownRoute when no window applies.
std::optional<Violation> check_transport_window(std::string_view operation, std::string_view origin,
                                                std::string_view destination,
                                                std::uint64_t elapsed_seconds,
                                                const CountryProfile& profile);

/// Required-operation audit plus every consecutive-pair violation.
std::vector<Violation> audit_dataset(const Passport& passport, const CountryProfile& profile);

enum class FactTarget { Prev, Next };
enum class Relation { Equals, Nonempty, Unchanged };

std::string_view fact_target_name(FactTarget t);
std::string_view relation_name(Relation r);

struct DeducedFact {
  FactTarget target = FactTarget::Prev;
  Field field = Field::Location;
  Relation relation = Relation::Equals;
  std::string value;
  std::string rule_id;

  bool operator==(const DeducedFact&) const = default;
};

using DeducedFacts = std::vector<DeducedFact>;

/// Opened values as rendered by render_field, keyed by field.
using OpenedFields = std::map<Field, std::string>;

/// Facts about the adjacent rows of the same passport that the profile's
/// rules force, given only the opened cells of one update. Prev facts hold
/// when the update was proved in Normal mode; Next facts hold when the
/// following update was. An opened exception flag of "true" yields no facts.
DeducedFacts infer_adjacent(const OpenedFields& opened, const CountryProfile& profile);

}  // namespace wpass
