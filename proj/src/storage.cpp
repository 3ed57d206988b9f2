// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/storage.hpp"

#include "wpass/error.hpp"

namespace wpass {

double StorageEstimate::total_gib() const { return static_cast<double>(total_bytes) / double(1ULL << 30); }

StorageEstimate estimate_storage(std::uint64_t updates_per_day, std::uint64_t years, std::uint64_t commitment_bytes,
                                 std::uint64_t response_bytes) {
  StorageEstimate e{updates_per_day, years, commitment_bytes, response_bytes, 0};
  std::uint64_t per_update = 0;
  std::uint64_t total = 0;
  if (__builtin_add_overflow(commitment_bytes, response_bytes, &per_update) ||
      __builtin_mul_overflow(updates_per_day, std::uint64_t{365}, &total) ||
      __builtin_mul_overflow(total, years, &total) || __builtin_mul_overflow(total, per_update, &total)) {
    throw Error(Errc::SchemaError, "storage estimate overflows 64 bits");
  }
  e.total_bytes = total;
  return e;
}

}  // namespace wpass
