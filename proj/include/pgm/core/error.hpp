#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pgm {

enum class ErrorCode {
  kInvalidArgument,
  kTableTooLarge,
  kScopeViolation,
  kInconsistentCalibration,
  kZeroMass,
  kImpossibleEvidence,
  kParse,
  kVariableMismatch,
  kAllSamplesRejected,
  kZeroTotalWeight,
  kNoConsistentExtension,
  kUnknownFormat,
  kIo,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every library failure is reported as a pgm::Error. The code lets callers
/// (the CLI in particular) classify the failure without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pgm
