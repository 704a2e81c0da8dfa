#include "rigaspec/error.hpp"

namespace rigaspec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::NotAKnot: return "not-a-knot";
    case ErrorCode::UnsupportedOrder: return "unsupported-order";
    case ErrorCode::DegenerateElement: return "degenerate-element";
    case ErrorCode::InconsistentLayout: return "inconsistent-layout";
    case ErrorCode::SingularMass: return "singular-mass";
    case ErrorCode::DimensionOverflow: return "dimension-overflow";
    case ErrorCode::IndefiniteMass: return "indefinite-mass";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::InvalidIndex: return "invalid-index";
    case ErrorCode::ModeRange: return "mode-range";
    case ErrorCode::UnsupportedContinuity: return "unsupported-continuity";
    case ErrorCode::SingularInterfaceBlock: return "singular-interface-block";
    case ErrorCode::InvalidDegree: return "invalid-degree";
    case ErrorCode::Undersampling: return "undersampling";
    case ErrorCode::ConfigInvalid: return "config-invalid";
    case ErrorCode::SlopeAssertion: return "slope-assertion-failure";
  }
  return "unknown";
}

}  // namespace rigaspec
