// Copyright 2026 The wpass Authors.
// Licensed under the Apache License, Version 2.0. See the LICENSE file at the
// root of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "wpass/error.hpp"

namespace wpass {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::BadHex: return "BadHex";
    case Errc::NonPowerOfTwo: return "NonPowerOfTwo";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MalformedProof: return "MalformedProof";
    case Errc::WidthExceeded: return "WidthExceeded";
    case Errc::UnknownCode: return "UnknownCode";
    case Errc::SchemaError: return "SchemaError";
    case Errc::InconsistentWindow: return "InconsistentWindow";
    case Errc::UnknownRoute: return "UnknownRoute";
    case Errc::CommitmentMismatch: return "CommitmentMismatch";
    case Errc::RuleViolations: return "RuleViolations";
    case Errc::MalformedException: return "MalformedException";
    case Errc::NotException: return "NotException";
    case Errc::RulesetMismatch: return "RulesetMismatch";
    case Errc::SetupVerifyFailure: return "SetupVerifyFailure";
    case Errc::UnknownTarget: return "UnknownTarget";
    case Errc::ScheduleViolation: return "ScheduleViolation";
    case Errc::ScenarioError: return "ScenarioError";
    case Errc::CorruptTranscript: return "CorruptTranscript";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace wpass
