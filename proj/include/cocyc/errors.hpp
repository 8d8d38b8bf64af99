#pragma once

#include <stdexcept>
#include <string>

namespace cocyc {

// Every failure the library can report deliberately.  The CLI maps these onto
// exit codes: Infeasible -> 2, BadInput -> 3, anything else escaping -> 4.
enum class Err {
  // construction / shape
  InvalidCocycle,    // non-square, wrong count, or a step matrix is (near-)singular
  ShapeMismatch,     // two cocycles with different dim or period
  IndexOutOfRange,
  InvalidPartition,
  InvalidSplitting,  // supplied fibers are not invariant / wrong dims
  MalformedInput,    // unparsable file, bad flag combination
  ZeroSeed,

  // solvable-but-says-no
  InsufficientBudget,
  NotHyperbolic,
  SignObstruction,
  OrientationObstruction,
  PreconditionViolated,
  EndpointMismatch,
  NoInvariantSplitting,
  NoCentralPlane,
  EmptyLanguage,
  DomainEscape,
  InvariantViolation,
  SingularProduct,
};

const char* err_name(Err e);

struct CocycleError : std::runtime_error {
  Err code;
  CocycleError(Err c, const std::string& what)
      : std::runtime_error(std::string(err_name(c)) + ": " + what), code(c) {}
};

// True for errors that mean "the request is well-formed but mathematically or
// budget-wise unachievable" (CLI exit 2); false -> malformed input (exit 3).
bool err_is_infeasible(Err e);

[[noreturn]] inline void fail(Err c, const std::string& what) {
  throw CocycleError(c, what);
}

}  // namespace cocyc
