#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rigaspec {

enum class ErrorCode {
  InvalidArgument,
  IndexOutOfRange,
  NotAKnot,
  UnsupportedOrder,
  DegenerateElement,
  InconsistentLayout,
  SingularMass,
  DimensionOverflow,
  IndefiniteMass,
  NoConvergence,
  InvalidIndex,
  ModeRange,
  UnsupportedContinuity,
  SingularInterfaceBlock,
  InvalidDegree,
  Undersampling,
  ConfigInvalid,
  SlopeAssertion,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this type; `code()`
/// identifies the failure class so callers (the CLI, the Python module) can
/// map it to exit codes or exception types.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by the numerics rather than by the caller's input.
  bool is_numerical() const noexcept {
    switch (code_) {
      case ErrorCode::SingularMass:
      case ErrorCode::IndefiniteMass:
      case ErrorCode::NoConvergence:
      case ErrorCode::SingularInterfaceBlock:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace rigaspec
