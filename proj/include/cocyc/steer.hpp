#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cocyc/cocycle.hpp"
#include "cocyc/paths.hpp"
#include "cocyc/product_spectrum.hpp"

// Plane-steering engine behind the path constructors.  A steered plane is the
// two-dimensional spectral subspace of an adjacent exponent pair, tracked at
// every orbit position together with a dual frame that annihilates the
// complementary spectral subspace.  Rotations inserted through that frame
// telescope around the period into a single rotation of the pair's return
// map and act as the identity on everything else, so untouched multipliers
// ride along unchanged up to roundoff.

namespace cocyc {

using Mat2 = Eigen::Matrix2d;
using LMat2 = Eigen::Matrix<long double, 2, 2>;

struct PlaneFrames {
  int lower = 0;                // pair occupies exponent slots (lower, lower+1)
  std::vector<Mat> v;           // d x 2 orthonormal plane frame per position
  std::vector<Mat> vg;          // 2 x d dual rows: vg*v = I, vg*(complement) = 0
  std::vector<Mat2> tbar;       // local pair eigenframe per position
  std::vector<Mat2> tbar_inv;
  std::vector<double> sens;     // per-position distance per unit inserted angle
  Mat2 ret;                     // pair return map in the position-0 frame,
                                // scaled by exp(-log_ret_scale)
  double log_ret_scale = 0.0;
  bool complex_pair = false;
  double lam_small = 0.0, lam_big = 0.0;  // real case: eigenvalues (scaled),
                                          // |small| <= |big|
  double rho = 0.0, psi = 0.0;            // complex case: ret ~ rho * R(psi)
  double trace0 = 0.0, det0 = 0.0;        // of the scaled return map
};

// Extracts the plane of pair (j, j+1) (1-based).  Both spectra are passed in
// so several planes of one cocycle share the sweep work.  Throws
// NoInvariantSplitting when the pair does not separate from the rest or the
// fibers are too close to parallel.
PlaneFrames extract_pair_plane(const PeriodicCocycle& c, int j,
                               const ProductSpectrum& fwd,
                               const ProductSpectrum& bwd);

struct SteerPlan {
  PlaneFrames frames;
  std::vector<double> gamma;  // per-position inserted angle at t = 1
  double beta = 0.0;          // total inserted angle
  // Optional axis-stretch diag(e^eta, e^-eta) inserted at one position, used
  // to push an unwound conjugate pair strictly off the parabolic locus.
  double eta = 0.0;
  int eta_pos = -1;
};

// Replaces the frames' invariant-complement dual rows with the plane's
// orthogonal projector and recomputes the per-position sensitivities.  This
// removes the cost inflation a nearly-parallel bystander direction causes, in
// exchange for perturbing that direction.  Use only for single-plane jobs
// whose caller re-measures afterwards and guarantees nothing about bystander
// exponents.
void orthogonalize_dual(const PeriodicCocycle& c, PlaneFrames& f);

// Splits `beta` across positions proportionally to their budget caps under
// distance budget `eps_share`; throws InsufficientBudget when the caps do not
// cover it.  `weights` (optional, per position) scales each cap, zero locking
// a position entirely.
std::vector<double> plan_angles(const PlaneFrames& f, double beta, double eps_share,
                                const std::vector<double>* weights = nullptr);

// The sample at parameter t: every step composed with its inserted rotations.
// t = 0 reproduces the base bitwise.
PeriodicCocycle steered_sample(const PeriodicCocycle& base,
                               const std::vector<SteerPlan>& plans, double t);

// Pair return map of `sample` measured in the frozen frames of `f`,
// accumulated in extended precision with the scale pulled out.
LMat2 plane_return(const PeriodicCocycle& sample, const PlaneFrames& f,
                   long double* log_scale);

// Angle of a near-conformal 2x2 map (atan2 of the skew part).
double conformal_angle(const LMat2& m);

CocyclePath assemble_path(const PeriodicCocycle& base,
                          const std::vector<SteerPlan>& plans, int grid_points);

}  // namespace cocyc
