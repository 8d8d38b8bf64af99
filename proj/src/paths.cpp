#include "cocyc/paths.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cocyc/errors.hpp"
#include "cocyc/linalg.hpp"
#include "cocyc/product_spectrum.hpp"
#include "cocyc/steer.hpp"

namespace cocyc {
namespace {

constexpr double kCmix = 200.0;  // calibration of the coarse budget estimate:
                                 // one unit of inserted angle mixes at most
                                 // this many units of exponent gap per period
// Relative trace overshoot past the parabolic locus at a blend endpoint.  It
// must dominate the read-back noise of an endpoint spectrum (a few 1e-14 on
// the pair's return trace in double precision) so the merged pair stays
// certifiably real, while the exponent split it induces, 2*sqrt(2m)/period,
// stays under the endpoint-equality tolerance — comfortable from period ~90.
constexpr long double kRealSplitMargin = 4e-14L;
constexpr double kEtaSplit = 1e-7;  // axis stretch detaching an unwound
                                    // conjugate pair from the parabolic locus
constexpr double kBystanderClearance = 2e-6;  // required distance from the
                                              // merged level to other exponents
// Contract tolerances (also the documented guarantees of the constructors).
constexpr double kSumTol = 1e-8;
constexpr double kEndEqTol = 1e-8;
constexpr double kMonoSlack = 1e-9;
constexpr double kDriftTol = 1e-6;
constexpr double kSepTol = 1e-6;
constexpr double kChiConstTol = 1e-8;
constexpr double kImagAbsTol = 1e-10;
constexpr double kMinImagUnit = 1e-9;  // certifiable non-realness at a
                                       // complexified endpoint

bool same_matrix(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

bool same_cocycle(const PeriodicCocycle& a, const PeriodicCocycle& b) {
  if (a.dim() != b.dim() || a.period() != b.period()) return false;
  for (int n = 0; n < a.period(); ++n)
    if (!same_matrix(a.step(n), b.step(n))) return false;
  return true;
}

// Lower (1-based) indices of adjacent conjugate multiplier pairs.
std::vector<int> complex_pair_lowers(const SpectrumReport& rep) {
  std::vector<int> out;
  for (int p = 1; p < rep.dim; ++p) {
    const Multiplier& a = rep.multipliers[static_cast<size_t>(p - 1)];
    const Multiplier& b = rep.multipliers[static_cast<size_t>(p)];
    if (!a.is_real() && !b.is_real() &&
        a.log_modulus == b.log_modulus &&
        a.unit.imag() == -b.unit.imag()) {
      out.push_back(p);
      ++p;
    }
  }
  return out;
}

// Documented first-pass feasibility estimate: a perturbation of size eps can
// insert at most asin(eps / 2K) of angle per step, and one unit of angle per
// period mixes at most kCmix units of exponent gap.
void coarse_budget_gate(const PeriodicCocycle& c, double movement, double eps) {
  if (movement <= 0.0) return;
  const double cap = std::asin(std::min(1.0, eps / (2.0 * c.bound())));
  if (cap < movement / (2.0 * kCmix))
    fail(Err::InsufficientBudget,
         "budget " + std::to_string(eps) + " cannot move exponents by " +
             std::to_string(movement) + " for a cocycle of bound " +
             std::to_string(c.bound()));
}

struct PlaneJob {
  PlaneFrames frames;
  bool to_trace = false;      // steer the pair trace (real pair)
  long double target_trace = 0.0L;  // in the scaled domain of frames.ret
  double target_angle = 0.0;  // absolute pair angle target (conjugate pair)
  bool add_eta = false;       // detach from the parabolic locus at the end
};

long double measured_scaled_trace(const PeriodicCocycle& endpoint,
                                  const PlaneFrames& f) {
  long double ls = 0.0L;
  const LMat2 g = plane_return(endpoint, f, &ls);
  return (g(0, 0) + g(1, 1)) *
         expl(ls - static_cast<long double>(f.log_ret_scale));
}

double measured_angle(const PeriodicCocycle& endpoint, const PlaneFrames& f) {
  long double ls = 0.0L;
  const LMat2 g = plane_return(endpoint, f, &ls);
  const LMat2 n = f.tbar_inv[0].cast<long double>() * g *
                  f.tbar[0].cast<long double>();
  return conformal_angle(n);
}

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

double plane_capsum(const PlaneFrames& f) {
  double capsum = 0.0;
  for (double s : f.sens)
    if (std::isfinite(s) && s > 0.0) capsum += 1.0 / s;
  return capsum;
}

// Angle distribution proportional to each position's budget cap.  The shape
// is scale-free, so a plane's per-position distance comes out uniform:
// gamma_n * sens_n = beta / capsum at every position that takes any angle.
std::vector<double> gamma_of(const PlaneFrames& f, double beta, double capsum) {
  std::vector<double> g(f.sens.size(), 0.0);
  if (beta == 0.0 || !(capsum > 0.0)) return g;
  for (size_t n = 0; n < g.size(); ++n) {
    const double s = f.sens[n];
    if (std::isfinite(s) && s > 0.0) g[n] = beta / (s * capsum);
  }
  return g;
}

// Finds the total angle driving the pair's (scaled) return trace to `target`
// by bisecting the measured response `resp`: no closed form survives the way
// hyperbolic positions absorb inserted rotation.  Lands on the >= side of the
// target so real-pair margins keep their sign.  `cap_beta` is the largest
// angle the distance budget supports; an unreachable target within it is an
// honest refusal.
template <typename Resp>
double solve_trace(const Resp& resp, double trace0, long double target,
                   double cap_beta) {
  const long double sgn = (trace0 < 0.0) ? -1.0L : 1.0L;
  const long double goal = sgn * target;
  const long double g0 = sgn * resp(0.0);
  if (goal >= g0) return 0.0;
  double lo = 0.0, hi = cap_beta;
  const long double gend = sgn * resp(hi);
  if (gend > goal)
    fail(Err::InsufficientBudget,
         "the largest supported steering angle " + std::to_string(cap_beta) +
             " leaves the pair trace at " +
             std::to_string(static_cast<double>(sgn * gend)) +
             ", short of its target " +
             std::to_string(static_cast<double>(target)));
  for (int it = 0; it < 64 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sgn * resp(mid) >= goal)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// Finds the total angle driving the pair's conformal angle to `target`
// (a multiple of pi).  Rotation through conformal structure composes almost
// exactly, so a couple of measured corrections settle it.
template <typename Resp>
double solve_angle(const Resp& resp, double psi, double target,
                   double cap_beta) {
  double beta = wrap_angle(target - psi);
  for (int it = 0; it < 12; ++it) {
    if (std::abs(beta) > cap_beta)
      fail(Err::InsufficientBudget,
           "unwinding the pair needs angle " + std::to_string(std::abs(beta)) +
               " but the budget supports only " + std::to_string(cap_beta));
    const double res = wrap_angle(target - resp(beta));
    if (std::abs(res) <= 1e-13) break;
    beta += res;
  }
  return beta;
}

// Solves every plane against the full budget, then verifies the joint
// per-position distance: each plane contributes |beta_p| / capsum_p at every
// position, so the sum must fit under the headroom cap.  Planes are solved
// sequentially with all previously solved insertions in place — they act on
// each other's pair as the identity, but only up to roundoff, and the trace
// targets carry margins close to that floor.  Angle jobs go first so trace
// jobs see the final geometry.  Returns the plans and the per-position
// distance committed (for cascades spending a shared budget across stages).
std::pair<std::vector<SteerPlan>, double> plan_and_correct(
    const PeriodicCocycle& c, std::vector<PlaneJob> jobs, double eps_cap) {
  if (!(eps_cap > 0.0))
    fail(Err::InsufficientBudget, "perturbation budget exhausted");
  std::vector<size_t> order;
  for (size_t p = 0; p < jobs.size(); ++p)
    if (!jobs[p].to_trace) order.push_back(p);
  for (size_t p = 0; p < jobs.size(); ++p)
    if (jobs[p].to_trace) order.push_back(p);

  std::vector<SteerPlan> plans(jobs.size());
  std::vector<SteerPlan> active;
  active.reserve(jobs.size());
  double used = 0.0;
  for (size_t idx : order) {
    PlaneJob& job = jobs[idx];
    const PlaneFrames& f = job.frames;
    const double capsum = plane_capsum(f);
    if (!(capsum > 0.0))
      fail(Err::InsufficientBudget,
           "no orbit position can absorb a perturbation for this pair");
    const double cap_beta = 0.9 * eps_cap * capsum;

    active.emplace_back();
    active.back().frames = f;
    auto sample_at = [&](double beta) {
      active.back().beta = beta;
      active.back().gamma = gamma_of(f, beta, capsum);
      return steered_sample(c, active, 1.0);
    };
    double beta = 0.0;
    if (job.to_trace) {
      auto resp = [&](double b) {
        return measured_scaled_trace(sample_at(b), f);
      };
      beta = solve_trace(resp, f.trace0, job.target_trace, cap_beta);
    } else {
      auto resp = [&](double b) { return measured_angle(sample_at(b), f); };
      beta = solve_angle(resp, f.psi, job.target_angle, cap_beta);
    }
    active.back().beta = beta;
    active.back().gamma = gamma_of(f, beta, capsum);
    if (job.add_eta) {
      size_t best = 0;
      double bs = std::numeric_limits<double>::infinity();
      for (size_t n = 0; n < f.sens.size(); ++n)
        if (f.sens[n] < bs) {
          bs = f.sens[n];
          best = n;
        }
      if (std::isfinite(bs)) {
        active.back().eta_pos = static_cast<int>(best);
        active.back().eta = kEtaSplit;
        used += kEtaSplit * bs;
      }
    }
    used += std::abs(beta) / capsum;
    plans[idx] = active.back();
  }
  if (used > 0.9 * eps_cap)
    fail(Err::InsufficientBudget,
         "the planes jointly need per-step distance " + std::to_string(used) +
             ", over the budget's headroom " + std::to_string(0.9 * eps_cap));
  return {std::move(plans), used};
}

double weaken_target(double tau, double delta) {
  return std::min(0.5 * (tau - delta), -0.5 * delta);
}

// Trace target hitting small-root log-modulus l * x_low while conserving the
// determinant; computed in the scaled domain of the plane's return map.
long double partial_trace_target(const PlaneFrames& f, int period, double x_low) {
  const long double ms =
      expl(static_cast<long double>(period) * static_cast<long double>(x_low) -
           static_cast<long double>(f.log_ret_scale));
  const long double sgn = (f.lam_small < 0.0) ? -1.0L : 1.0L;
  const long double small = sgn * ms;
  return small + static_cast<long double>(f.det0) / small;
}

}  // namespace

CocyclePath::CocyclePath(PeriodicCocycle base, std::vector<double> grid,
                         std::vector<PeriodicCocycle> samples)
    : base_(std::move(base)), grid_(std::move(grid)), samples_(std::move(samples)) {
  if (grid_.size() != samples_.size() || grid_.size() < 2)
    fail(Err::PreconditionViolated,
         "a path needs matching grids and samples with at least two points");
  if (grid_.front() != 0.0 || grid_.back() != 1.0)
    fail(Err::PreconditionViolated, "path grid must start at 0 and end at 1");
  for (size_t k = 1; k < grid_.size(); ++k)
    if (!(grid_[k] > grid_[k - 1]))
      fail(Err::PreconditionViolated, "path grid must increase strictly");
  for (const auto& s : samples_)
    if (s.dim() != base_.dim() || s.period() != base_.period())
      fail(Err::ShapeMismatch, "path sample shape differs from the base");
  if (!same_cocycle(samples_.front(), base_))
    fail(Err::PreconditionViolated, "path must start exactly at its base");
  radius_ = 0.0;
  for (const auto& s : samples_)
    radius_ = std::max(radius_, cocycle_distance(base_, s));
}

CocyclePath CocyclePath::constant(const PeriodicCocycle& c, int grid_points) {
  if (grid_points < 2)
    fail(Err::PreconditionViolated, "a path needs at least two grid points");
  std::vector<double> ts(static_cast<size_t>(grid_points));
  std::vector<PeriodicCocycle> samples(static_cast<size_t>(grid_points), c);
  for (int k = 0; k < grid_points; ++k)
    ts[static_cast<size_t>(k)] =
        (k == grid_points - 1) ? 1.0 : static_cast<double>(k) / (grid_points - 1);
  return CocyclePath(c, std::move(ts), std::move(samples));
}

const char* path_kind_name(PathKind k) {
  switch (k) {
    case PathKind::Blend: return "blend";
    case PathKind::Realify: return "realify";
    case PathKind::Weaken: return "weaken";
    case PathKind::Collapse: return "collapse";
    case PathKind::Complexify: return "complexify";
  }
  return "unknown";
}

CocyclePath blend_exponents(const PeriodicCocycle& c, int j, double eps,
                            int grid_points) {
  const int d = c.dim();
  if (j < 1 || j + 1 > d)
    fail(Err::IndexOutOfRange, "blend index must lie in 1..dim-1");
  if (!(eps > 0.0))
    fail(Err::PreconditionViolated, "perturbation budget must be positive");

  const Tolerances tol;
  const SpectrumReport rep = lyapunov_spectrum(c);
  const double lo = rep.exponents[static_cast<size_t>(j - 1)];
  const double hi = rep.exponents[static_cast<size_t>(j)];
  if (hi - lo <= tol.equality) return CocyclePath::constant(c, grid_points);
  if (!rep.hyperbolic)
    fail(Err::NotHyperbolic, "the return product has a unit-modulus multiplier");
  // Budget feasibility is screened before any structural objection: a budget
  // nowhere near the gap is the cheaper and more actionable refusal.
  coarse_budget_gate(c, hi - lo, eps);
  if (lo < 0.0 && hi > 0.0)
    fail(Err::SignObstruction,
         "exponents straddle zero; blending them forces a unit-modulus "
         "crossing somewhere along the family");

  const double merged = 0.5 * (lo + hi);
  for (int m = 1; m <= d; ++m) {
    if (m == j || m == j + 1) continue;
    if (std::abs(rep.exponents[static_cast<size_t>(m - 1)] - merged) <=
        kBystanderClearance)
      fail(Err::PreconditionViolated,
           "the merged level would collide with exponent " + std::to_string(m));
  }

  const ProductSpectrum fwd = analyze_product(c);
  const ProductSpectrum bwd = analyze_product(c.inverse());

  std::vector<PlaneJob> jobs;
  {
    PlaneJob main;
    main.frames = extract_pair_plane(c, j, fwd, bwd);
    const long double det = static_cast<long double>(main.frames.det0);
    if (det > 0.0L) {
      const long double sgn = (main.frames.trace0 < 0.0) ? -1.0L : 1.0L;
      main.target_trace = sgn * 2.0L * sqrtl(det) * (1.0L + kRealSplitMargin);
    } else {
      main.target_trace = 0.0L;  // opposite-sign pair: equal moduli at trace 0
    }
    main.to_trace = true;
    jobs.push_back(std::move(main));
  }
  for (int p : complex_pair_lowers(rep)) {
    PlaneJob side;
    side.frames = extract_pair_plane(c, p, fwd, bwd);
    side.target_angle = std::round(side.frames.psi / M_PI) * M_PI;
    side.add_eta = true;  // the endpoint must be real, not merely unwound
    jobs.push_back(std::move(side));
  }

  auto [plans, used] = plan_and_correct(c, std::move(jobs), eps);
  (void)used;
  return assemble_path(c, plans, grid_points);
}

CocyclePath realify(const PeriodicCocycle& c, double eps, int grid_points) {
  if (!(eps > 0.0))
    fail(Err::PreconditionViolated, "perturbation budget must be positive");
  const SpectrumReport rep = lyapunov_spectrum(c);
  const std::vector<int> pairs = complex_pair_lowers(rep);
  if (pairs.empty()) return CocyclePath::constant(c, grid_points);
  if (!rep.hyperbolic)
    fail(Err::NotHyperbolic, "the return product has a unit-modulus multiplier");

  const ProductSpectrum fwd = analyze_product(c);
  const ProductSpectrum bwd = analyze_product(c.inverse());
  std::vector<PlaneJob> jobs;
  for (int p : pairs) {
    PlaneJob job;
    job.frames = extract_pair_plane(c, p, fwd, bwd);
    job.target_angle = std::round(job.frames.psi / M_PI) * M_PI;
    jobs.push_back(std::move(job));
  }
  auto [plans, used] = plan_and_correct(c, std::move(jobs), eps);
  (void)used;
  return assemble_path(c, plans, grid_points);
}

CocyclePath weaken_exponent(const PeriodicCocycle& c, int i, double delta,
                            double eps, int grid_points) {
  const int d = c.dim();
  if (i < 1 || i + 1 > d)
    fail(Err::IndexOutOfRange, "weaken index must lie in 1..dim-1");
  if (!(delta > 0.0))
    fail(Err::PreconditionViolated, "window width delta must be positive");
  if (!(eps > 0.0))
    fail(Err::PreconditionViolated, "perturbation budget must be positive");

  const SpectrumReport rep = lyapunov_spectrum(c);
  const double lo = rep.exponents[static_cast<size_t>(i - 1)];
  const double hi = rep.exponents[static_cast<size_t>(i)];
  if (!(lo < 0.0 && hi > 0.0))
    fail(Err::PreconditionViolated,
         "exponents i, i+1 must straddle zero to weaken the contraction");
  const double tau = lo + hi;
  if (!(tau > -delta))
    fail(Err::PreconditionViolated,
         "pair sum " + std::to_string(tau) + " does not exceed -delta");
  if (!rep.hyperbolic)
    fail(Err::NotHyperbolic, "the return product has a unit-modulus multiplier");
  if (lo > -delta) return CocyclePath::constant(c, grid_points);

  const double target = weaken_target(tau, delta);
  coarse_budget_gate(c, 2.0 * (target - lo), eps);

  const ProductSpectrum fwd = analyze_product(c);
  const ProductSpectrum bwd = analyze_product(c.inverse());
  PlaneJob job;
  job.frames = extract_pair_plane(c, i, fwd, bwd);
  job.to_trace = true;
  job.target_trace = partial_trace_target(job.frames, c.period(), target);
  std::vector<PlaneJob> jobs;
  jobs.push_back(std::move(job));
  auto [plans, used] = plan_and_correct(c, std::move(jobs), eps);
  (void)used;
  return assemble_path(c, plans, grid_points);
}

CocyclePath collapse_to_sink_or_source(const PeriodicCocycle& c, bool sink,
                                       double eps, int grid_points) {
  const int d = c.dim();
  const int l = c.period();
  if (!(eps > 0.0))
    fail(Err::PreconditionViolated, "perturbation budget must be positive");

  const SpectrumReport rep0 = lyapunov_spectrum(c);
  const double mean = rep0.exponent_sum() / d;
  if (sink ? !(mean < 0.0) : !(mean > 0.0))
    fail(Err::SignObstruction,
         std::string("the exponent mean must be strictly ") +
             (sink ? "negative to reach a sink" : "positive to reach a source"));

  const double m_stop = 0.02 * std::abs(rep0.exponent_sum()) / d;
  // Kept gap between the two members of each merged pair.  One whole unit of
  // log-modulus across the period keeps the merged pair's eigenvectors at an
  // O(1) angle; a much smaller gap leaves them nearly parallel, which poisons
  // the dual bases (and hence the budget) of every later stage that treats
  // one of them as a bystander.
  const double g = 1.0 / l;
  // Repeated pair-averaging funnels every exponent toward the mean, but each
  // merged pair keeps its gap; the final stack cannot sit tighter to the mean
  // than that, so the mean itself must clear the stop margin plus the stack.
  if (std::abs(mean) <= m_stop + 0.5 * (d - 1) * g)
    fail(Err::InsufficientBudget,
         "the exponent mean is too close to zero to park every exponent on "
         "the target side at this period");

  // Mirror trick: a source is a sink of the reflected exponent data, so all
  // selection logic below works on sign-flipped copies when needed.
  auto flipped = [&](const std::vector<double>& e) {
    std::vector<double> out(e.rbegin(), e.rend());
    for (double& x : out) x = -x;
    return out;
  };

  std::vector<CocyclePath> segments;
  PeriodicCocycle current = c;
  double spent = 0.0;
  const int max_rounds = 8 * d + 8;
  int round = 0;
  for (; round < max_rounds; ++round) {
    const SpectrumReport rc = lyapunov_spectrum(current);
    std::vector<double> e = rc.exponents;
    if (!sink) e = flipped(e);
    if (e.back() <= -m_stop) break;  // everything on the target side already

    const std::vector<int> cplx = complex_pair_lowers(rc);
    std::vector<int> must_realify;
    for (int p : cplx) {
      const double top = sink ? rc.exponents[static_cast<size_t>(p)]
                              : -rc.exponents[static_cast<size_t>(p - 1)];
      if (top > -m_stop) must_realify.push_back(p);
    }

    const ProductSpectrum fwd = analyze_product(current);
    const ProductSpectrum bwd = analyze_product(current.inverse());
    std::vector<PlaneJob> jobs;
    if (!must_realify.empty()) {
      for (int p : must_realify) {
        PlaneJob job;
        job.frames = extract_pair_plane(current, p, fwd, bwd);
        job.target_angle = std::round(job.frames.psi / M_PI) * M_PI;
        jobs.push_back(std::move(job));
      }
    } else {
      // Real spectrum: among pairs whose upper member still sits on the wrong
      // side and which have a genuine gap, mix the cheapest (smallest gap).
      // A merge may land above the target (positive pair means); later rounds
      // pair the result with lower exponents until everything settles.
      int pick = 0;
      double pick_gap = std::numeric_limits<double>::infinity();
      for (int p = 1; p < d; ++p) {
        const double gap = e[static_cast<size_t>(p)] - e[static_cast<size_t>(p - 1)];
        if (e[static_cast<size_t>(p)] > -m_stop && gap > 3.0 * g &&
            gap < pick_gap) {
          pick = p;
          pick_gap = gap;
        }
      }
      if (pick == 0)
        fail(Err::InsufficientBudget,
             "no exponent pair can make further progress toward the target");
      // Merge symmetrically about the pair mean.  Stopping the upper member
      // short of the mean (to save movement) strands the cascade: the saved
      // negative mass piles up in the bottom slot while the top slots converge
      // toward each other in ever-smaller, eventually unusable gaps.
      const double mu = 0.5 * (e[static_cast<size_t>(pick - 1)] +
                               e[static_cast<size_t>(pick)]);
      const double x_high = mu + 0.5 * g;
      const double x_low =
          e[static_cast<size_t>(pick - 1)] + e[static_cast<size_t>(pick)] - x_high;
      // Map back to the unflipped ordering for the extraction index.
      const int jj = sink ? pick : d - pick;
      const double x_low_real = sink ? x_low : -x_high;
      PlaneJob job;
      job.frames = extract_pair_plane(current, jj, fwd, bwd);
      // A cascade merge owns the whole cocycle: nothing outside the pair is
      // promised, and the next round re-measures everything, so the cheap
      // projector dual beats paying for exact bystander invariance (merged
      // pairs leave nearly-parallel directions that make it very expensive).
      orthogonalize_dual(current, job.frames);
      job.to_trace = true;
      job.target_trace = partial_trace_target(job.frames, l, x_low_real);
      jobs.push_back(std::move(job));
    }

    auto [plans, used] = plan_and_correct(current, std::move(jobs),
                                          eps - spent);
    spent += used;
    CocyclePath seg = assemble_path(current, plans, grid_points);
    current = seg.endpoint();
    segments.push_back(std::move(seg));
  }
  if (round == max_rounds)
    fail(Err::InsufficientBudget, "the blending cascade did not settle");
  if (segments.empty()) return CocyclePath::constant(c, grid_points);

  CocyclePath out = segments.front();
  for (size_t k = 1; k < segments.size(); ++k)
    out = concatenate(out, segments[k]);
  return out;
}

CocyclePath concatenate(const CocyclePath& p, const CocyclePath& q) {
  if (p.base().dim() != q.base().dim() ||
      p.base().period() != q.base().period())
    fail(Err::ShapeMismatch, "paths live over different cocycle shapes");
  if (!same_cocycle(p.endpoint(), q.base()))
    fail(Err::EndpointMismatch,
         "the first path must end exactly where the second begins");

  const size_t np = p.grid().size();
  const size_t nq = q.grid().size();
  const double w = static_cast<double>(np - 1) /
                   static_cast<double>((np - 1) + (nq - 1));
  std::vector<double> ts;
  std::vector<PeriodicCocycle> samples;
  ts.reserve(np + nq - 1);
  samples.reserve(np + nq - 1);
  for (size_t k = 0; k < np; ++k) {
    ts.push_back((k == np - 1) ? w : p.grid()[k] * w);
    samples.push_back(p.samples()[k]);
  }
  for (size_t k = 1; k < nq; ++k) {
    ts.push_back((k == nq - 1) ? 1.0 : w + q.grid()[k] * (1.0 - w));
    samples.push_back(q.samples()[k]);
  }
  return CocyclePath(p.base(), std::move(ts), std::move(samples));
}

ContractVerdict verify_contract(const CocyclePath& p, const PathContract& contract,
                                const Tolerances& tol) {
  const int d = p.base().dim();
  const size_t nt = p.grid().size();
  std::vector<SpectrumReport> reps;
  reps.reserve(nt);
  for (const auto& s : p.samples()) reps.push_back(lyapunov_spectrum(s, tol));
  const SpectrumReport& first = reps.front();
  const SpectrumReport& last = reps.back();

  ContractVerdict v;
  auto clause = [&](const std::string& name, double margin, bool strict = false) {
    ClauseReport cr;
    cr.name = name;
    cr.margin = margin;
    cr.pass = strict ? (margin > 0.0) : (margin >= 0.0);
    v.clauses.push_back(std::move(cr));
  };

  clause("radius_within_budget", contract.epsilon - p.radius());

  auto grid_hyperbolic_margin = [&]() {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : reps)
      for (const auto& mu : r.multipliers)
        m = std::min(m, std::abs(std::expm1(mu.log_modulus)));
    return m - tol.unit_circle;
  };
  auto drift_margin = [&](int skip_lo, int skip_hi, double tolerance) {
    double worst = 0.0;
    for (const auto& r : reps)
      for (int m = 1; m <= d; ++m) {
        if (m >= skip_lo && m <= skip_hi) continue;
        worst = std::max(worst,
                         std::abs(r.exponents[static_cast<size_t>(m - 1)] -
                                  first.exponents[static_cast<size_t>(m - 1)]));
      }
    return tolerance - worst;
  };

  const int j = contract.index;
  switch (contract.kind) {
    case PathKind::Blend: {
      clause("hyperbolic_along_path", grid_hyperbolic_margin(), true);
      double sum_dev = 0.0;
      double mono_lo = std::numeric_limits<double>::infinity();
      double mono_hi = std::numeric_limits<double>::infinity();
      const double sum0 = first.exponents[static_cast<size_t>(j - 1)] +
                          first.exponents[static_cast<size_t>(j)];
      for (size_t k = 0; k < nt; ++k) {
        const double a = reps[k].exponents[static_cast<size_t>(j - 1)];
        const double b = reps[k].exponents[static_cast<size_t>(j)];
        sum_dev = std::max(sum_dev, std::abs(a + b - sum0));
        if (k > 0) {
          mono_lo = std::min(
              mono_lo, a - reps[k - 1].exponents[static_cast<size_t>(j - 1)]);
          mono_hi = std::min(
              mono_hi, reps[k - 1].exponents[static_cast<size_t>(j)] - b);
        }
      }
      clause("pair_sum_conserved", kSumTol - sum_dev);
      clause("lower_exponent_monotone", mono_lo + kMonoSlack);
      clause("upper_exponent_monotone", mono_hi + kMonoSlack);
      clause("bystanders_fixed", drift_margin(j, j + 1, kDriftTol));
      clause("endpoint_pair_equal",
             kEndEqTol - std::abs(last.exponents[static_cast<size_t>(j - 1)] -
                                  last.exponents[static_cast<size_t>(j)]));
      double im = 0.0;
      for (const auto& mu : last.multipliers)
        im = std::max(im, std::abs(mu.unit.imag()));
      clause("endpoint_all_real", -im);
      double sep = std::numeric_limits<double>::infinity();
      for (int m = 1; m <= d; ++m) {
        if (m == j || m == j + 1) continue;
        sep = std::min(sep,
                       std::abs(last.exponents[static_cast<size_t>(m - 1)] -
                                last.exponents[static_cast<size_t>(j - 1)]));
      }
      if (d > 2) clause("endpoint_pair_isolated", sep - kSepTol, true);
      break;
    }
    case PathKind::Realify: {
      clause("hyperbolic_along_path", grid_hyperbolic_margin(), true);
      clause("exponents_constant", drift_margin(0, 0, kChiConstTol));
      double im = 0.0;
      for (const auto& mu : last.multipliers)
        im = std::max(im, std::abs(mu.value().imag()));
      clause("endpoint_imag_small", kImagAbsTol - im, true);
      break;
    }
    case PathKind::Weaken: {
      clause("hyperbolic_along_path", grid_hyperbolic_margin(), true);
      double window = std::numeric_limits<double>::infinity();
      for (const auto& r : reps)
        window = std::min(window,
                          std::min(-r.exponents[static_cast<size_t>(j - 1)],
                                   r.exponents[static_cast<size_t>(j)]));
      clause("pair_straddles_zero", window, true);
      const double tau0 = first.exponents[static_cast<size_t>(j - 1)] +
                          first.exponents[static_cast<size_t>(j)];
      double sum_dev = 0.0;
      for (const auto& r : reps)
        sum_dev = std::max(
            sum_dev, std::abs(r.exponents[static_cast<size_t>(j - 1)] +
                              r.exponents[static_cast<size_t>(j)] - tau0));
      clause("pair_sum_conserved", kSumTol - sum_dev);
      const double target = weaken_target(tau0, contract.delta);
      clause("endpoint_hits_target",
             kEndEqTol - std::abs(last.exponents[static_cast<size_t>(j - 1)] -
                                  target));
      clause("endpoint_inside_window",
             std::min(last.exponents[static_cast<size_t>(j - 1)] + contract.delta,
                      -last.exponents[static_cast<size_t>(j - 1)]),
             true);
      clause("bystanders_fixed", drift_margin(j, j + 1, kDriftTol));
      break;
    }
    case PathKind::Collapse: {
      double extreme = -std::numeric_limits<double>::infinity();
      for (const auto& mu : last.multipliers) {
        const double lm = contract.sink ? mu.log_modulus : -mu.log_modulus;
        extreme = std::max(extreme, lm);
      }
      clause(contract.sink ? "endpoint_all_contracting"
                           : "endpoint_all_expanding",
             -extreme, true);
      break;
    }
    case PathKind::Complexify: {
      clause("hyperbolic_along_path", grid_hyperbolic_margin(), true);
      const Multiplier& ma = last.multipliers[static_cast<size_t>(j - 1)];
      const Multiplier& mb = last.multipliers[static_cast<size_t>(j)];
      const double im =
          std::min(std::abs(ma.unit.imag()), std::abs(mb.unit.imag()));
      clause("endpoint_pair_complex", im - kMinImagUnit, true);
      // A conjugate pair read off a real matrix is exactly symmetric.
      clause("endpoint_moduli_equal",
             -std::abs(ma.log_modulus - mb.log_modulus));
      const double sum0 = first.exponents[static_cast<size_t>(j - 1)] +
                          first.exponents[static_cast<size_t>(j)];
      clause("pair_sum_conserved",
             kSumTol - std::abs(last.exponents[static_cast<size_t>(j - 1)] +
                                last.exponents[static_cast<size_t>(j)] - sum0));
      clause("bystanders_fixed", drift_margin(j, j + 1, kDriftTol));
      double sep = std::numeric_limits<double>::infinity();
      for (int m = 1; m <= d; ++m) {
        if (m == j || m == j + 1) continue;
        sep = std::min(sep,
                       std::abs(last.exponents[static_cast<size_t>(m - 1)] -
                                last.exponents[static_cast<size_t>(j - 1)]));
      }
      if (d > 2) clause("endpoint_pair_isolated", sep - kSepTol, true);
      break;
    }
  }

  v.pass = true;
  for (const auto& cl : v.clauses) v.pass = v.pass && cl.pass;
  return v;
}

}  // namespace cocyc
