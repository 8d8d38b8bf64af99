#pragma once

#include <Eigen/Dense>

#include <string>

#include "cocyc/cocycle.hpp"

namespace cocyc {

// Affine center-stable model: a contracting 2x2 block whose eigenvalue
// moduli coincide, together with a marked nonzero seed vector.
struct CenterStableModel {
  Eigen::Matrix2d block;
  Eigen::Vector2d seed;
};

enum class CenterClass { Homothety, Parabolic, Complex };

const char* center_class_name(CenterClass c);

// Trichotomy for the central block: a scalar multiple of the identity, a
// repeated eigenvalue with a single invariant line, or a rotating pair.
// Blocks outside the model (spectral radius at or above one, unequal
// eigenvalue moduli, or an equal-modulus real pair of opposite signs) are
// rejected with InvariantViolation.
CenterClass classify_center(const CenterStableModel& m);

struct IterationReport {
  Eigen::Vector2d direction;  // canonical unit vector: first coordinate
                              // nonnegative, second positive on ties
  double angle_to_invariant = 0.0;
  int steps = 0;
  CenterClass cls = CenterClass::Homothety;
};

// Applies the block to the seed the given number of times, renormalizing
// every step.  A homothety leaves every line invariant, so the report is
// the canonicalized seed at angle zero; a parabolic block drags the seed
// onto its unique invariant line at rate O(1/steps).  Rotating blocks have
// no limiting direction and are refused.
IterationReport normalized_iteration_limit(const CenterStableModel& m,
                                           int steps);

struct SurrogateVerdict {
  bool holds = false;
  double spectral_gap = 0.0;  // exponent at the interface minus the one below
  bool direction_within = false;
  std::string note;  // records that the directional clause is model-level
};

// Interface test at 1-based index i (2 <= i <= dim-1): the exponent below
// the interface must sit strictly under the one at it, and the supplied
// direction angle must fall inside the directional tolerance.  The
// directional clause stands in for an intersection of invariant manifolds
// that only a nonlinear model could witness, so every verdict carries a
// note saying the judgment is model-level.
SurrogateVerdict check_pss_spectral_and_directional(
    const SpectrumReport& rep, int i, double direction_angle,
    const Tolerances& tol = {}, double angle_tol = 1e-6);

}  // namespace cocyc
