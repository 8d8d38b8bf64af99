#include "cocyc/errors.hpp"

namespace cocyc {

const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidCocycle: return "InvalidCocycle";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::InvalidPartition: return "InvalidPartition";
    case Err::InvalidSplitting: return "InvalidSplitting";
    case Err::MalformedInput: return "MalformedInput";
    case Err::ZeroSeed: return "ZeroSeed";
    case Err::InsufficientBudget: return "InsufficientBudget";
    case Err::NotHyperbolic: return "NotHyperbolic";
    case Err::SignObstruction: return "SignObstruction";
    case Err::OrientationObstruction: return "OrientationObstruction";
    case Err::PreconditionViolated: return "PreconditionViolated";
    case Err::EndpointMismatch: return "EndpointMismatch";
    case Err::NoInvariantSplitting: return "NoInvariantSplitting";
    case Err::NoCentralPlane: return "NoCentralPlane";
    case Err::EmptyLanguage: return "EmptyLanguage";
    case Err::DomainEscape: return "DomainEscape";
    case Err::InvariantViolation: return "InvariantViolation";
    case Err::SingularProduct: return "SingularProduct";
  }
  return "Unknown";
}

bool err_is_infeasible(Err e) {
  switch (e) {
    case Err::InsufficientBudget:
    case Err::NotHyperbolic:
    case Err::SignObstruction:
    case Err::OrientationObstruction:
    case Err::PreconditionViolated:
    case Err::EndpointMismatch:
    case Err::NoInvariantSplitting:
    case Err::NoCentralPlane:
    case Err::EmptyLanguage:
    case Err::DomainEscape:
    case Err::InvariantViolation:
    case Err::SingularProduct:
      return true;
    default:
      return false;
  }
}

}  // namespace cocyc
