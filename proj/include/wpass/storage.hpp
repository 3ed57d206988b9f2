// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>

namespace wpass {

struct StorageEstimate {
  std::uint64_t updates_per_day = 0;
  std::uint64_t years = 0;
  std::uint64_t commitment_bytes = 79;
  std::uint64_t response_bytes = 140;
  /// updates_per_day * 365 * years * (commitment_bytes + response_bytes)
  std::uint64_t total_bytes = 0;

  /// total_bytes / 2^30
  double total_gib() const;
};

/// Throws SchemaError if the product overflows 64 bits.
StorageEstimate estimate_storage(std::uint64_t updates_per_day, std::uint64_t years,
                                 std::uint64_t commitment_bytes = 79, std::uint64_t response_bytes = 140);

}  // namespace wpass
