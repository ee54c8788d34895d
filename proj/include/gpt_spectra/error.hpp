#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gpt {

enum class ErrorCode {
  DimensionMismatch,
  OutOfRange,
  NotNormalized,
  NotInCone,
  NotPure,
  DaggerNotUnique,
  NotExtendable,
  NotDistinguishable,
  ResidualOutsideCone,
  NotDiagonalizable,
  NotSymmetric,
  NoConvergence,
  LengthMismatch,
  NotSorted,
  NotSquare,
  NoPerfectMatching,
  NotMajorized,
  NotMaximal,
  SynthesisVerificationFailed,
  NotContained,
  InvalidInput,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotInCone: return "NotInCone";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::DaggerNotUnique: return "DaggerNotUnique";
    case ErrorCode::NotExtendable: return "NotExtendable";
    case ErrorCode::NotDistinguishable: return "NotDistinguishable";
    case ErrorCode::ResidualOutsideCone: return "ResidualOutsideCone";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NoPerfectMatching: return "NoPerfectMatching";
    case ErrorCode::NotMajorized: return "NotMajorized";
    case ErrorCode::NotMaximal: return "NotMaximal";
    case ErrorCode::SynthesisVerificationFailed: return "SynthesisVerificationFailed";
    case ErrorCode::NotContained: return "NotContained";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a stable code; the message is
/// free-form detail for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace gpt
