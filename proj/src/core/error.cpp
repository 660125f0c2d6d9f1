#include "pgm/core/error.hpp"

namespace pgm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kTableTooLarge: return "table too large";
    case ErrorCode::kScopeViolation: return "scope violation";
    case ErrorCode::kInconsistentCalibration: return "inconsistent calibration";
    case ErrorCode::kZeroMass: return "zero mass";
    case ErrorCode::kImpossibleEvidence: return "impossible evidence";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kVariableMismatch: return "variable mismatch";
    case ErrorCode::kAllSamplesRejected: return "all samples rejected";
    case ErrorCode::kZeroTotalWeight: return "zero total weight";
    case ErrorCode::kNoConsistentExtension: return "no consistent extension";
    case ErrorCode::kUnknownFormat: return "unknown format";
    case ErrorCode::kIo: return "i/o error";
  }
  return "error";
}

}  // namespace pgm
