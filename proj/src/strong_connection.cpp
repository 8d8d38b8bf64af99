#include "cocyc/strong_connection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cocyc/errors.hpp"

namespace cocyc {
namespace {

constexpr double kModulusTol = 1e-9;    // eigenvalue moduli must agree this far
constexpr double kHomothetyTol = 1e-9;  // max deviation from lambda * I
constexpr double kDiscRel = 1e-12;      // repeated-root window for the
                                        // discriminant, relative to the
                                        // squared entry scale

struct BlockForm {
  double tr = 0.0, det = 0.0, disc = 0.0, disc_tol = 0.0;
};

BlockForm block_form(const Eigen::Matrix2d& b) {
  BlockForm f;
  f.tr = b(0, 0) + b(1, 1);
  f.det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  f.disc = f.tr * f.tr - 4.0 * f.det;
  const double s = std::max(1.0, b.cwiseAbs().maxCoeff());
  f.disc_tol = kDiscRel * s * s;
  return f;
}

Eigen::Vector2d canonical(Eigen::Vector2d v) {
  if (v.x() < 0.0 || (v.x() == 0.0 && v.y() < 0.0)) v = -v;
  return v;
}

}  // namespace

const char* center_class_name(CenterClass c) {
  switch (c) {
    case CenterClass::Homothety:
      return "homothety";
    case CenterClass::Parabolic:
      return "parabolic";
    case CenterClass::Complex:
      return "complex";
  }
  return "unknown";
}

CenterClass classify_center(const CenterStableModel& m) {
  const BlockForm f = block_form(m.block);
  if (f.disc < -f.disc_tol) {
    // Rotating pair with common modulus sqrt(det).
    if (!(f.det < 1.0))
      fail(Err::InvariantViolation, "spectral radius must stay below one");
    return CenterClass::Complex;
  }
  if (f.disc <= f.disc_tol) {
    const double lam = 0.5 * f.tr;
    if (!(std::abs(lam) < 1.0))
      fail(Err::InvariantViolation, "spectral radius must stay below one");
    Eigen::Matrix2d dev = m.block;
    dev(0, 0) -= lam;
    dev(1, 1) -= lam;
    return (dev.cwiseAbs().maxCoeff() <= kHomothetyTol)
               ? CenterClass::Homothety
               : CenterClass::Parabolic;
  }
  const double root = std::sqrt(f.disc);
  const double hi = 0.5 * (f.tr + root);
  const double lo = 0.5 * (f.tr - root);
  if (!(std::max(std::abs(hi), std::abs(lo)) < 1.0))
    fail(Err::InvariantViolation, "spectral radius must stay below one");
  // Distinct real roots of the same sign differ in modulus by sqrt(disc),
  // already far beyond the modulus tolerance here, so an equal-modulus
  // survivor must be an opposite-sign pair.
  if (std::abs(std::abs(hi) - std::abs(lo)) <= kModulusTol)
    fail(Err::InvariantViolation,
         "an equal-modulus pair of opposite signs preserves two lines and "
         "falls outside the model");
  fail(Err::InvariantViolation, "eigenvalue moduli must agree");
}

IterationReport normalized_iteration_limit(const CenterStableModel& m,
                                           int steps) {
  if (steps < 1) fail(Err::PreconditionViolated, "need at least one step");
  const double n0 = m.seed.norm();
  if (!(n0 > 0.0)) fail(Err::ZeroSeed, "seed vector must be nonzero");

  IterationReport rep;
  rep.steps = steps;
  rep.cls = classify_center(m);
  if (rep.cls == CenterClass::Complex)
    fail(Err::PreconditionViolated,
         "a rotating block has no limiting direction");
  if (rep.cls == CenterClass::Homothety) {
    rep.direction = canonical(m.seed / n0);
    rep.angle_to_invariant = 0.0;
    return rep;
  }

  // Parabolic: the invariant line is the image (equally the kernel) of the
  // nilpotent part; take its larger column for conditioning.
  const double lam = 0.5 * (m.block(0, 0) + m.block(1, 1));
  Eigen::Matrix2d nil = m.block;
  nil(0, 0) -= lam;
  nil(1, 1) -= lam;
  Eigen::Vector2d axis = (nil.col(0).norm() >= nil.col(1).norm())
                             ? Eigen::Vector2d(nil.col(0))
                             : Eigen::Vector2d(nil.col(1));
  axis /= axis.norm();

  Eigen::Vector2d v = m.seed / n0;
  for (int s = 0; s < steps; ++s) {
    v = m.block * v;
    const double nv = v.norm();
    if (!(nv > 0.0)) fail(Err::SingularProduct, "iterate collapsed to zero");
    v /= nv;
  }
  const double cross = std::abs(v.x() * axis.y() - v.y() * axis.x());
  rep.angle_to_invariant = std::asin(std::min(1.0, cross));
  rep.direction = canonical(v);
  return rep;
}

SurrogateVerdict check_pss_spectral_and_directional(const SpectrumReport& rep,
                                                    int i,
                                                    double direction_angle,
                                                    const Tolerances& tol,
                                                    double angle_tol) {
  if (i < 2 || i > rep.dim - 1)
    fail(Err::IndexOutOfRange, "interface index must lie in 2..dim-1");
  SurrogateVerdict v;
  v.spectral_gap = rep.exponents[static_cast<size_t>(i - 1)] -
                   rep.exponents[static_cast<size_t>(i - 2)];
  v.direction_within = direction_angle < angle_tol;
  v.holds = (v.spectral_gap > tol.equality) && v.direction_within;
  v.note =
      "directional clause judged in the affine center model, not on "
      "invariant manifolds";
  return v;
}

}  // namespace cocyc
