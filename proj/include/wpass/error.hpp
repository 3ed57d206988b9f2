// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wpass {

enum class Errc {
  BadHex,
  NonPowerOfTwo,
  IndexOutOfRange,
  MalformedProof,
  WidthExceeded,
  UnknownCode,
  SchemaError,
  InconsistentWindow,
  UnknownRoute,
  CommitmentMismatch,
  RuleViolations,
  MalformedException,
  NotException,
  RulesetMismatch,
  SetupVerifyFailure,
  UnknownTarget,
  ScheduleViolation,
  ScenarioError,
  CorruptTranscript,
  Io,
};

std::string_view errc_name(Errc code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wpass
