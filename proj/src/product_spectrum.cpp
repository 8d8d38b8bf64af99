#include "cocyc/product_spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "cocyc/errors.hpp"
#include "cocyc/linalg.hpp"

namespace cocyc {
namespace {

constexpr double kFloorTol = 1e-15;    // per-sweep movement at the machine floor
constexpr double kTailTol = 1e-12;     // certified remaining-distance bound
constexpr double kStallRatio = 0.99995;  // decay ratio treated as no progress
constexpr double kTieGap = 1e-9;  // log-modulus gap below which levels count as tied

// Deterministic generic start frame: a fixed-seed random orthogonal matrix.
// Starting from the identity can sit forever on an exactly invariant but
// wrongly ordered arrangement (e.g. diagonal steps with increasing moduli).
Mat seeded_orthogonal(int d) {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = gauss(rng);
  Mat q, r;
  qr_positive(m, q, r);
  return q;
}

bool mult_less(const Multiplier& a, const Multiplier& b) {
  if (a.log_modulus != b.log_modulus) return a.log_modulus < b.log_modulus;
  const bool ra = a.is_real();
  const bool rb = b.is_real();
  if (ra != rb) return ra;  // real before complex
  if (a.unit.real() != b.unit.real()) return a.unit.real() < b.unit.real();
  return a.unit.imag() > b.unit.imag();  // positive imaginary part first
}

}  // namespace

ProductSpectrum analyze_product(const PeriodicCocycle& c, int max_sweeps) {
  const int d = c.dim();
  const int l = c.period();

  // Scale each step to unit operator norm so sweep arithmetic never leaves a
  // tame range; the pulled-out scale re-enters every log-modulus at the end.
  std::vector<Mat> a(static_cast<size_t>(l));
  long double log_scale = 0.0L;
  for (int n = 0; n < l; ++n) {
    const double s = op_norm(c.step(n));
    if (!(s > 0.0) || !std::isfinite(s))
      fail(Err::SingularProduct, "step with zero or non-finite norm");
    a[static_cast<size_t>(n)] = c.step(n) / s;
    log_scale += std::log(static_cast<long double>(s));
  }

  // Per-boundary certification.  The subspace left of boundary k settles
  // geometrically with per-sweep ratio exp(-l * gap_k); the per-sweep movement
  // delta inherits that ratio, so the distance still to go is bounded by the
  // geometric tail delta * rho / (1 - rho).  The ratio is estimated over an
  // eight-sweep window (smooths even/odd wobble); a ratio pinned at one means
  // a tie or a defective block, which merges into one level group instead.
  struct BoundaryState {
    std::array<double, 8> hist{};  // ring of recent per-sweep movements
    int nhist = 0;
    int conv_streak = 0;
    int stall_streak = 0;
    int floor_streak = 0;
    bool converged = false;
    bool stalled = false;
  };
  std::vector<BoundaryState> bnd(static_cast<size_t>(d - 1));

  Mat q = seeded_orthogonal(d);
  Mat y, r;
  int sweeps = 0;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    sweeps = sweep;
    const Mat q_start = q;
    for (int n = 0; n < l; ++n) {
      y = a[static_cast<size_t>(n)] * q;
      qr_positive(y, q, r);
    }
    bool all_resolved = true;
    for (int k = 1; k < d; ++k) {
      BoundaryState& st = bnd[static_cast<size_t>(k - 1)];
      if (st.converged || st.stalled) continue;
      const double delta = span_distance(q_start.leftCols(k), q.leftCols(k));
      if (delta < kFloorTol) {
        if (++st.floor_streak >= 3) st.converged = true;
      } else {
        st.floor_streak = 0;
      }
      if (st.nhist >= 8) {
        const double old = std::max(st.hist[static_cast<size_t>(st.nhist % 8)],
                                    kFloorTol);
        const double rho = std::pow(delta / old, 1.0 / 8.0);
        if (rho < kStallRatio) {
          st.stall_streak = 0;
          const double rr = std::max(rho, 0.05);
          if (delta * rr / (1.0 - rr) < kTailTol) {
            if (++st.conv_streak >= 2) st.converged = true;
          } else {
            st.conv_streak = 0;
          }
        } else {
          st.conv_streak = 0;
          if (++st.stall_streak >= 24 && sweep >= 48) st.stalled = true;
        }
      }
      st.hist[static_cast<size_t>(st.nhist % 8)] = delta;
      ++st.nhist;
      if (!st.converged && !st.stalled) all_resolved = false;
    }
    if (all_resolved) break;
  }

  // Final transport pass: per-point frames plus the triangularized step
  // factors; the last factor closes the loop against the period-start frame.
  std::vector<Mat> flags(static_cast<size_t>(l));
  std::vector<Mat> t(static_cast<size_t>(l));
  flags[0] = q;
  for (int n = 0; n < l; ++n) {
    y = a[static_cast<size_t>(n)] * flags[static_cast<size_t>(n)];
    if (n + 1 < l) {
      qr_positive(y, flags[static_cast<size_t>(n + 1)], r);
      t[static_cast<size_t>(n)] = r;
    } else {
      t[static_cast<size_t>(n)] = flags[0].transpose() * y;
    }
  }

  // Modulus-level groups in frame-column order: cut at converged boundaries.
  std::vector<std::pair<int, int>> ranges;  // [lo, hi) column ranges
  {
    int lo = 0;
    for (int k = 1; k < d; ++k) {
      if (bnd[static_cast<size_t>(k - 1)].converged) {
        ranges.emplace_back(lo, k);
        lo = k;
      }
    }
    ranges.emplace_back(lo, d);
  }

  struct ClusterOut {
    std::vector<Multiplier> mults;
    int lo = 0, hi = 0;  // frame-column range the group came from
  };
  std::vector<ClusterOut> outs;
  outs.reserve(ranges.size());
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  for (const auto& [lo, hi] : ranges) {
    const int m = hi - lo;
    // Extended precision here buys the discriminant resolution that separates
    // real pairs from conjugate pairs at the margins path synthesis produces.
    LMat p = LMat::Identity(m, m);
    long double sigma = 0.0L;       // pulled-out block-product scale
    long double det_target = 0.0L;  // exact log|det| budget for this group
    for (int n = 0; n < l; ++n) {
      // Re-form the restricted step directly from the stored step and frames
      // instead of reusing the double-precision triangular factor: forming it
      // here keeps the per-step rounding at extended precision, which is what
      // bounds how finely two nearly equal moduli can be told apart.
      const Mat& qn = flags[static_cast<size_t>(n)];
      const Mat& qn1 = flags[static_cast<size_t>((n + 1) % l)];
      const LMat block = qn1.middleCols(lo, m).cast<long double>().transpose() *
                         a[static_cast<size_t>(n)].cast<long double>() *
                         qn.middleCols(lo, m).cast<long double>();
      const long double bd = fabsl(block.determinant());
      if (!(bd > 0.0L) || !std::isfinite(static_cast<double>(bd)))
        fail(Err::SingularProduct, "diagonal block became singular");
      det_target += logl(bd);
      p = block * p;
      const long double s = p.cwiseAbs().maxCoeff();
      if (!(s > 0.0L) || !std::isfinite(static_cast<double>(s)))
        fail(Err::SingularProduct, "block product degenerated");
      p /= s;
      sigma += logl(s);
    }
    Eigen::EigenSolver<LMat> es(p);
    if (es.info() != Eigen::Success)
      fail(Err::SingularProduct, "block product eigensolve failed");
    long double raw_sum = 0.0L;
    std::vector<std::complex<long double>> eig(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      eig[static_cast<size_t>(i)] = es.eigenvalues()(i);
      const long double am = std::abs(eig[static_cast<size_t>(i)]);
      if (!(am > 0.0L) || !std::isfinite(static_cast<double>(am)))
        fail(Err::SingularProduct, "zero eigenvalue in block product");
      raw_sum += sigma + logl(am);
    }
    // Shift the group's log-moduli so their sum meets the determinant budget.
    const long double shift = (det_target - raw_sum) / m;
    ClusterOut co;
    co.lo = lo;
    co.hi = hi;
    for (int i = 0; i < m; ++i) {
      const std::complex<long double> z = eig[static_cast<size_t>(i)];
      const long double am = std::abs(z);
      const std::complex<long double> u = z / am;
      Multiplier mu;
      mu.log_modulus = static_cast<double>(sigma + logl(am) + shift + log_scale);
      mu.unit = std::complex<double>(static_cast<double>(u.real()),
                                     static_cast<double>(u.imag()));
      co.mults.push_back(mu);
    }
    outs.push_back(std::move(co));
  }

  ProductSpectrum ps;
  ps.sweeps = sweeps;
  ps.flags = std::move(flags);

  // A converged boundary certifies a split exactly when every modulus level
  // left of it sits strictly above every level right of it.  Judging each
  // boundary on its own handles exact ties, whose frozen directions converge
  // as spurious singleton groups in arbitrary arrangement.
  ps.split_available.assign(static_cast<size_t>(d - 1), 0);
  for (int k = 1; k < d; ++k) {
    if (!bnd[static_cast<size_t>(k - 1)].converged) continue;
    double lead_min = std::numeric_limits<double>::infinity();
    double trail_max = -std::numeric_limits<double>::infinity();
    for (const auto& co : outs) {
      for (const auto& mu : co.mults) {
        if (co.hi <= k) lead_min = std::min(lead_min, mu.log_modulus);
        if (co.lo >= k) trail_max = std::max(trail_max, mu.log_modulus);
      }
    }
    if (lead_min - trail_max > kTieGap)
      ps.split_available[static_cast<size_t>(d - k - 1)] = 1;  // index = d - k
  }

  for (const auto& co : outs)
    for (const auto& mu : co.mults) ps.multipliers.push_back(mu);
  std::stable_sort(ps.multipliers.begin(), ps.multipliers.end(), mult_less);

  // Level groups for reporting: maximal runs not separated by a genuine gap.
  int cid = 0;
  int run_start = 0;
  for (int i = 0; i < d; ++i) {
    if (i > 0 && ps.multipliers[static_cast<size_t>(i)].log_modulus -
                         ps.multipliers[static_cast<size_t>(i - 1)].log_modulus >
                     kTieGap) {
      ps.clusters.emplace_back(run_start, i - 1);
      run_start = i;
      ++cid;
    }
    ps.cluster_id.push_back(cid);
  }
  ps.clusters.emplace_back(run_start, d - 1);
  return ps;
}

}  // namespace cocyc
