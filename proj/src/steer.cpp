#include "cocyc/steer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cocyc/errors.hpp"
#include "cocyc/linalg.hpp"
#include "cocyc/paths.hpp"

namespace cocyc {
namespace {

constexpr double kFrameCondCap = 1e6;   // frame condition beyond which a
                                        // position gets no angle budget
constexpr double kJointFloor = 1e-8;    // smallest singular value tolerated
                                        // for [plane | complement]
constexpr double kCapHeadroom = 0.9;    // fraction of eps the caps may fill

// Eigen-decomposes a real 2x2 map.  Real branch fills (lam_small, lam_big,
// frame of unit eigenvectors); complex branch fills (rho, psi, real invariant
// frame in which the map is rho * R(+-psi)).
struct PairForm {
  bool complex_pair = false;
  double lam_small = 0.0, lam_big = 0.0;
  double rho = 0.0, psi = 0.0;
  Mat2 frame;
};

PairForm pair_form(const Mat2& m) {
  PairForm out;
  const double tr = m(0, 0) + m(1, 1);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    const double big = (tr >= 0.0) ? 0.5 * (tr + root) : 0.5 * (tr - root);
    double small = (big != 0.0) ? det / big : 0.5 * (tr - root);
    if (big == 0.0 && small == 0.0) small = 0.5 * (tr + root);
    out.lam_small = small;
    out.lam_big = big;
    if (std::abs(out.lam_small) > std::abs(out.lam_big))
      std::swap(out.lam_small, out.lam_big);
    auto eigvec = [&](double lam) {
      Eigen::Vector2d v1(m(0, 1), lam - m(0, 0));
      Eigen::Vector2d v2(lam - m(1, 1), m(1, 0));
      Eigen::Vector2d v = (v1.norm() >= v2.norm()) ? v1 : v2;
      const double nv = v.norm();
      if (nv == 0.0) return Eigen::Vector2d(1.0, 0.0);  // scalar multiple of I
      return Eigen::Vector2d(v / nv);
    };
    out.frame.col(0) = eigvec(out.lam_small);
    out.frame.col(1) = eigvec(out.lam_big);
    // Repeated roots: a homothety accepts any orthonormal frame, while a
    // genuine shear keeps its collapsed frame and is rejected downstream.
    if (std::abs(out.frame.determinant()) < 1e-12) {
      const double dev = std::max(
          std::max(std::abs(m(0, 1)), std::abs(m(1, 0))),
          std::abs(m(0, 0) - m(1, 1)));
      if (dev <= 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
        out.frame = Mat2::Identity();
    }
    if (out.frame.determinant() < 0.0) out.frame.col(1) = -out.frame.col(1);
    return out;
  }
  out.complex_pair = true;
  const double q = 0.5 * std::sqrt(-disc);
  out.rho = std::sqrt(det);  // det > 0 whenever the pair is complex
  out.psi = std::atan2(m(1, 0) - m(0, 1), tr);  // matches conformal_angle
  // Real/imaginary parts of an eigenvector; of the two algebraic choices take
  // the better-conditioned real frame.
  Eigen::Vector2d u1(m(0, 1), 0.5 * (m(1, 1) - m(0, 0)));
  Eigen::Vector2d v1(0.0, q);
  Eigen::Vector2d u2(0.5 * (m(0, 0) - m(1, 1)), m(1, 0));
  Eigen::Vector2d v2(q, 0.0);
  const double det1 = std::abs(u1.x() * v1.y() - u1.y() * v1.x()) /
                      std::max(1e-300, u1.norm() * v1.norm());
  const double det2 = std::abs(u2.x() * v2.y() - u2.y() * v2.x()) /
                      std::max(1e-300, u2.norm() * v2.norm());
  Eigen::Vector2d u = (det1 >= det2) ? u1 : u2;
  Eigen::Vector2d v = (det1 >= det2) ? v1 : v2;
  const double sc = std::max(u.norm(), v.norm());
  out.frame.col(0) = u / sc;
  out.frame.col(1) = v / sc;
  // Positively oriented frames only, so that a rotation inserted through the
  // frame turns the pair the same way the frame's own angle convention reads.
  if (out.frame.determinant() < 0.0) out.frame.col(1) = -out.frame.col(1);
  return out;
}

Mat2 normalized2(const Mat2& m) {
  const double f = m.norm();  // Frobenius; any scalar works for a frame
  return (f > 0.0) ? Mat2(m / f) : m;
}

double cond2(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  const double smin = svd.singularValues()(1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return svd.singularValues()(0) / smin;
}

}  // namespace

PlaneFrames extract_pair_plane(const PeriodicCocycle& c, int j,
                               const ProductSpectrum& fwd,
                               const ProductSpectrum& bwd) {
  const int d = c.dim();
  const int l = c.period();
  if (j < 1 || j + 1 > d)
    fail(Err::IndexOutOfRange, "pair index must lie in 1..dim-1");

  const bool has_below = j > 1;       // boundary between j-1 and j
  const bool has_above = j + 1 < d;   // boundary between j+1 and j+2
  if (has_below && !(fwd.split_at(j - 1) && bwd.split_at(d - j + 1)))
    fail(Err::NoInvariantSplitting,
         "pair does not separate from levels below index " + std::to_string(j));
  if (has_above && !(fwd.split_at(j + 1) && bwd.split_at(d - j - 1)))
    fail(Err::NoInvariantSplitting,
         "pair does not separate from levels above index " +
             std::to_string(j + 1));

  PlaneFrames f;
  f.lower = j;
  f.v.resize(static_cast<size_t>(l));
  f.vg.resize(static_cast<size_t>(l));
  f.tbar.resize(static_cast<size_t>(l));
  f.tbar_inv.resize(static_cast<size_t>(l));
  f.sens.resize(static_cast<size_t>(l));

  for (int n = 0; n < l; ++n) {
    const int m = (l - n) % l;  // inverse dynamics position at the same point
    Mat plane;
    if (d == 2) {
      plane = Mat::Identity(2, 2);
    } else if (!has_below) {
      plane = bwd.flags[static_cast<size_t>(m)].leftCols(2);
    } else if (!has_above) {
      plane = fwd.flags[static_cast<size_t>(n)].leftCols(2);
    } else {
      const Mat weak = bwd.flags[static_cast<size_t>(m)].leftCols(j + 1);
      const Mat strong = fwd.flags[static_cast<size_t>(n)].leftCols(d - j + 1);
      plane = span_intersection(weak, strong);
      if (plane.cols() != 2)
        fail(Err::NoInvariantSplitting,
             "pair plane did not resolve to two dimensions at position " +
                 std::to_string(n));
    }

    Mat joint(d, d);
    if (d == 2) {
      joint = plane;
    } else {
      Mat comp(d, d - 2);
      int at = 0;
      if (has_below) {
        comp.middleCols(at, j - 1) =
            bwd.flags[static_cast<size_t>(m)].leftCols(j - 1);
        at += j - 1;
      }
      if (has_above) {
        comp.middleCols(at, d - j - 1) =
            fwd.flags[static_cast<size_t>(n)].leftCols(d - j - 1);
      }
      joint << plane, comp;
    }
    if (min_sv(joint) < kJointFloor)
      fail(Err::NoInvariantSplitting,
           "pair plane nearly parallel to its complement at position " +
               std::to_string(n));
    f.v[static_cast<size_t>(n)] = plane;
    f.vg[static_cast<size_t>(n)] = joint.inverse().topRows(2);
  }

  // Pair return map in position-0 coordinates, scale pulled out per step.
  Mat2 ret = Mat2::Identity();
  long double log_scale = 0.0L;
  std::vector<Mat2> c_step(static_cast<size_t>(l));
  for (int n = 0; n < l; ++n) {
    const Mat& vn = f.v[static_cast<size_t>(n)];
    const Mat& vn1 = f.v[static_cast<size_t>((n + 1) % l)];
    const Mat2 cn = (vn1.transpose() * c.step(n) * vn).eval();
    c_step[static_cast<size_t>(n)] = cn;
    ret = cn * ret;
    const double s = ret.cwiseAbs().maxCoeff();
    if (!(s > 0.0) || !std::isfinite(s))
      fail(Err::SingularProduct, "pair return map degenerated");
    ret /= s;
    log_scale += std::log(static_cast<long double>(s));
  }
  f.ret = ret;
  f.log_ret_scale = static_cast<double>(log_scale);
  f.trace0 = ret(0, 0) + ret(1, 1);
  f.det0 = ret(0, 0) * ret(1, 1) - ret(0, 1) * ret(1, 0);

  const PairForm pf = pair_form(ret);
  f.complex_pair = pf.complex_pair;
  f.lam_small = pf.lam_small;
  f.lam_big = pf.lam_big;
  f.rho = pf.rho;
  f.psi = pf.psi;

  // Per-position eigenframes of the local return map (the loop product based
  // at each position).  Inserting rotations through the local frame keeps the
  // per-position cost at the frame's own conditioning; carrying one frame
  // covariantly around the loop would instead degrade it exponentially in the
  // pair's internal gap.  The price is that inserted angles compose only
  // approximately across positions, which the endpoint correction absorbs.
  f.tbar[0] = normalized2(pf.frame);
  Mat2 local = ret;
  for (int n = 1; n < l; ++n) {
    const Mat2& cn = c_step[static_cast<size_t>(n - 1)];
    local = cn * local * cn.inverse();
    const double s = local.cwiseAbs().maxCoeff();
    if (!(s > 0.0) || !std::isfinite(s))
      fail(Err::SingularProduct, "local pair return map degenerated");
    local /= s;
    f.tbar[static_cast<size_t>(n)] = normalized2(pair_form(local).frame);
  }
  for (int n = 0; n < l; ++n) {
    const Mat2& tb = f.tbar[static_cast<size_t>(n)];
    const double dt = tb(0, 0) * tb(1, 1) - tb(0, 1) * tb(1, 0);
    if (!(std::abs(dt) > 1e-300))
      fail(Err::NoInvariantSplitting, "pair eigenframe collapsed");
    f.tbar_inv[static_cast<size_t>(n)] = tb.inverse();

    const double kappa = cond2(tb);
    const Mat av = c.step(n) * f.v[static_cast<size_t>(n)];
    const Mat vg_ainv =
        f.vg[static_cast<size_t>(n)] * c.step_inverse(n);
    const double fwd_gain = op_norm(av) * op_norm(f.vg[static_cast<size_t>(n)]);
    const double bwd_gain = op_norm(vg_ainv);
    double s = kappa * std::max(fwd_gain, bwd_gain);
    if (!(kappa < kFrameCondCap)) s = std::numeric_limits<double>::infinity();
    f.sens[static_cast<size_t>(n)] = s;
  }
  // The pair angle must be read in the same frame the endpoint measurements
  // use, where the return map is exactly conformal; the raw coordinates of
  // the plane can skew it arbitrarily.
  if (f.complex_pair)
    f.psi = conformal_angle(f.tbar_inv[0].cast<long double>() *
                            ret.cast<long double>() *
                            f.tbar[0].cast<long double>());
  return f;
}

void orthogonalize_dual(const PeriodicCocycle& c, PlaneFrames& f) {
  // Swap the invariant-complement dual for the plane's orthogonal projector.
  // Insertions then cost only the plane's own norms — no inflation when some
  // other invariant direction runs close to the plane — at the price of
  // dragging those directions slightly instead of leaving them fixed.  Only
  // a caller that re-measures between stages and promises nothing about
  // bystanders (a single-plane merge inside a cascade) may afford that trade.
  const int l = c.period();
  for (int n = 0; n < l; ++n) {
    f.vg[static_cast<size_t>(n)] = f.v[static_cast<size_t>(n)].transpose();
    const double kappa = cond2(f.tbar[static_cast<size_t>(n)]);
    const Mat av = c.step(n) * f.v[static_cast<size_t>(n)];
    const Mat vg_ainv = f.vg[static_cast<size_t>(n)] * c.step_inverse(n);
    double s = kappa * std::max(op_norm(av), op_norm(vg_ainv));
    if (!(kappa < kFrameCondCap)) s = std::numeric_limits<double>::infinity();
    f.sens[static_cast<size_t>(n)] = s;
  }
}

std::vector<double> plan_angles(const PlaneFrames& f, double beta, double eps_share,
                                const std::vector<double>* weights) {
  const size_t l = f.sens.size();
  std::vector<double> cap(l, 0.0);
  double total = 0.0;
  for (size_t n = 0; n < l; ++n) {
    const double w = weights ? (*weights)[n] : 1.0;
    const double s = f.sens[n];
    if (w > 0.0 && std::isfinite(s) && s > 0.0)
      cap[n] = kCapHeadroom * eps_share * w / s;
    total += cap[n];
  }
  if (!(total >= std::abs(beta)))
    fail(Err::InsufficientBudget,
         "inserted angle " + std::to_string(std::abs(beta)) +
             " exceeds the distance budget's capacity " + std::to_string(total));
  std::vector<double> gamma(l, 0.0);
  if (beta != 0.0 && total > 0.0)
    for (size_t n = 0; n < l; ++n) gamma[n] = beta * cap[n] / total;
  return gamma;
}

PeriodicCocycle steered_sample(const PeriodicCocycle& base,
                               const std::vector<SteerPlan>& plans, double t) {
  const int d = base.dim();
  const int l = base.period();
  std::vector<Mat> steps;
  steps.reserve(static_cast<size_t>(l));
  for (int n = 0; n < l; ++n) {
    bool touched = false;
    for (const auto& p : plans) {
      if (t * p.gamma[static_cast<size_t>(n)] != 0.0) touched = true;
      if (p.eta_pos == n && t * p.eta != 0.0) touched = true;
    }
    if (!touched) {
      steps.push_back(base.step(n));
      continue;
    }
    Mat m = Mat::Identity(d, d);
    for (const auto& p : plans) {
      const double theta = t * p.gamma[static_cast<size_t>(n)];
      const double eta = (p.eta_pos == n) ? t * p.eta : 0.0;
      if (theta == 0.0 && eta == 0.0) continue;
      Mat2 inner = rot2(theta);
      if (eta != 0.0) {
        Mat2 h;
        h << std::exp(eta), 0.0, 0.0, std::exp(-eta);
        inner = inner * h;
      }
      inner -= Mat2::Identity();
      const Mat2 lifted = p.frames.tbar[static_cast<size_t>(n)] * inner *
                          p.frames.tbar_inv[static_cast<size_t>(n)];
      m += p.frames.v[static_cast<size_t>(n)] * lifted *
           p.frames.vg[static_cast<size_t>(n)];
    }
    steps.push_back(base.step(n) * m);
  }
  return PeriodicCocycle(std::move(steps), base.label());
}

LMat2 plane_return(const PeriodicCocycle& sample, const PlaneFrames& f,
                   long double* log_scale) {
  const int l = sample.period();
  LMat2 p = LMat2::Identity();
  long double ls = 0.0L;
  for (int n = 0; n < l; ++n) {
    const Mat& vn = f.v[static_cast<size_t>(n)];
    const Mat& vn1 = f.v[static_cast<size_t>((n + 1) % l)];
    const LMat2 cn =
        (vn1.transpose() * sample.step(n) * vn).cast<long double>();
    p = cn * p;
    const long double s = p.cwiseAbs().maxCoeff();
    if (!(s > 0.0L))
      fail(Err::SingularProduct, "steered pair return map degenerated");
    p /= s;
    ls += logl(s);
  }
  if (log_scale) *log_scale = ls;
  return p;
}

double conformal_angle(const LMat2& m) {
  return static_cast<double>(
      atan2l(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1)));
}

CocyclePath assemble_path(const PeriodicCocycle& base,
                          const std::vector<SteerPlan>& plans, int grid_points) {
  if (grid_points < 2)
    fail(Err::PreconditionViolated, "a path needs at least two grid points");
  std::vector<double> ts(static_cast<size_t>(grid_points));
  std::vector<PeriodicCocycle> samples;
  samples.reserve(static_cast<size_t>(grid_points));
  for (int k = 0; k < grid_points; ++k) {
    const double t =
        (k == grid_points - 1) ? 1.0 : static_cast<double>(k) / (grid_points - 1);
    ts[static_cast<size_t>(k)] = t;
    samples.push_back(steered_sample(base, plans, t));
  }
  return CocyclePath(base, std::move(ts), std::move(samples));
}

}  // namespace cocyc
