#include "cocyc/two_loop.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cocyc/errors.hpp"
#include "cocyc/linalg.hpp"
#include "cocyc/product_spectrum.hpp"
#include "cocyc/splitting.hpp"
#include "cocyc/steer.hpp"

namespace cocyc {
namespace {

// Relative trace undershoot below the parabolic locus at the endpoint: deep
// enough that the conjugate pair's angle, about sqrt(2 * margin), clears the
// 1e-9 realness tolerance by orders of magnitude, yet still a negligible
// share of the movement budget.
constexpr long double kComplexMargin = 1e-6L;
constexpr double kCapHeadroom = 0.9;          // matches the planner's headroom
constexpr double kBystanderClearance = 2e-6;  // required distance from the
                                              // merged level to other exponents
constexpr double kCmix = 200.0;  // coarse budget estimate: one unit of angle
                                 // mixes at most this much gap per period

void coarse_budget_gate(const PeriodicCocycle& c, double movement, double eps) {
  if (movement <= 0.0) return;
  const double cap = std::asin(std::min(1.0, eps / (2.0 * c.bound())));
  if (cap < movement / (2.0 * kCmix))
    fail(Err::InsufficientBudget,
         "budget " + std::to_string(eps) + " cannot move exponents by " +
             std::to_string(movement) + " for a cocycle of bound " +
             std::to_string(c.bound()));
}

bool conjugate_pair(const Multiplier& a, const Multiplier& b) {
  return !a.is_real() && !b.is_real() && a.log_modulus == b.log_modulus &&
         a.unit.imag() == -b.unit.imag();
}

// Lexicographically strictly smaller than every nontrivial rotation of
// itself: the canonical representative of a primitive necklace.
bool is_lyndon(const std::vector<int>& w) {
  const size_t p = w.size();
  for (size_t r = 1; r < p; ++r) {
    int cmp = 0;
    for (size_t i = 0; i < p; ++i) {
      const int a = w[i];
      const int b = w[(i + r) % p];
      if (a != b) {
        cmp = (a < b) ? -1 : 1;
        break;
      }
    }
    if (cmp >= 0) return false;  // a rotation ties (imprimitive) or beats it
  }
  return true;
}

}  // namespace

PeriodicCocycle build_two_loop_cocycle(const TwoLoopSpec& spec) {
  const int d = static_cast<int>(spec.fixed.rows());
  if (d < 2 || spec.fixed.cols() != d)
    fail(Err::InvalidCocycle, "the fixed block must be square, dim >= 2");
  if (spec.n < 1)
    fail(Err::PreconditionViolated, "dwell length n must be at least 1");
  if (spec.transition.empty())
    fail(Err::PreconditionViolated, "the excursion needs at least one step");
  for (const Mat& t : spec.transition)
    if (t.rows() != d || t.cols() != d)
      fail(Err::ShapeMismatch, "excursion step shape differs from the saddle");

  const Eigen::EigenSolver<Mat> es(spec.fixed);
  for (int i = 0; i < d; ++i)
    if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) <= 1e-9)
      fail(Err::NotHyperbolic,
           "the saddle block has a unit-modulus eigenvalue");

  std::vector<Mat> steps;
  steps.reserve(static_cast<size_t>(2 * spec.n + 2 + 2 * spec.transition.size()));
  for (int loop = 0; loop < 2; ++loop) {
    for (int i = 0; i <= spec.n; ++i) steps.push_back(spec.fixed);
    for (const Mat& t : spec.transition) steps.push_back(t);
  }
  return PeriodicCocycle(std::move(steps));
}

std::vector<char> two_loop_dwell_mask(const TwoLoopSpec& spec) {
  const int r = static_cast<int>(spec.transition.size());
  std::vector<char> mask;
  mask.reserve(static_cast<size_t>(2 * spec.n + 2 + 2 * r));
  for (int loop = 0; loop < 2; ++loop) {
    for (int i = 0; i <= spec.n; ++i) mask.push_back(1);
    for (int i = 0; i < r; ++i) mask.push_back(0);
  }
  return mask;
}

int central_orientation_sign(const PeriodicCocycle& c, int j) {
  if (j < 1 || j + 1 > c.dim())
    fail(Err::IndexOutOfRange, "pair index must lie in 1..dim-1");
  try {
    const ProductSpectrum fwd = analyze_product(c);
    const ProductSpectrum bwd = analyze_product(c.inverse());
    const PlaneFrames f = extract_pair_plane(c, j, fwd, bwd);
    // det0 is the restricted return determinant up to the positive factor
    // exp(2 * log_ret_scale), so its sign is the orientation sign.
    return (f.det0 > 0.0) ? 1 : -1;
  } catch (const CocycleError& e) {
    if (e.code == Err::NoInvariantSplitting)
      fail(Err::NoCentralPlane,
           std::string("no invariant plane tracks the pair: ") + e.what());
    throw;
  }
}

CocyclePath make_complex(const PeriodicCocycle& c, int j, double eps,
                         int grid_points, const std::vector<char>* step_mask) {
  const int d = c.dim();
  const int l = c.period();
  if (j < 1 || j + 1 > d)
    fail(Err::IndexOutOfRange, "pair index must lie in 1..dim-1");
  if (!(eps > 0.0))
    fail(Err::PreconditionViolated, "perturbation budget must be positive");
  if (step_mask && static_cast<int>(step_mask->size()) != l)
    fail(Err::ShapeMismatch, "step mask length differs from the period");

  const SpectrumReport rep = lyapunov_spectrum(c);
  const Multiplier& ma = rep.multipliers[static_cast<size_t>(j - 1)];
  const Multiplier& mb = rep.multipliers[static_cast<size_t>(j)];
  if (conjugate_pair(ma, mb)) return CocyclePath::constant(c, grid_points);
  if (!ma.is_real() || !mb.is_real())
    fail(Err::PreconditionViolated,
         "the pair is neither real nor a conjugate pair; its members belong "
         "to different conjugate couples");
  if (!rep.hyperbolic)
    fail(Err::NotHyperbolic, "the return product has a unit-modulus multiplier");

  const double lo = rep.exponents[static_cast<size_t>(j - 1)];
  const double hi = rep.exponents[static_cast<size_t>(j)];
  coarse_budget_gate(c, hi - lo, eps);
  if (ma.unit.real() * mb.unit.real() < 0.0)
    fail(Err::OrientationObstruction,
         "the pair's multipliers carry opposite signs; a rotation family "
         "cannot join them into a conjugate pair");
  if (lo < 0.0 && hi > 0.0)
    fail(Err::SignObstruction,
         "exponents straddle zero; merging their moduli forces a "
         "unit-modulus crossing somewhere along the family");

  const double merged = 0.5 * (lo + hi);
  for (int m = 1; m <= d; ++m) {
    if (m == j || m == j + 1) continue;
    if (std::abs(rep.exponents[static_cast<size_t>(m - 1)] - merged) <=
        kBystanderClearance)
      fail(Err::PreconditionViolated,
           "the merged level would collide with exponent " + std::to_string(m));
  }

  SteerPlan plan;
  try {
    const ProductSpectrum fwd = analyze_product(c);
    const ProductSpectrum bwd = analyze_product(c.inverse());
    plan.frames = extract_pair_plane(c, j, fwd, bwd);
  } catch (const CocycleError& e) {
    if (e.code == Err::NoInvariantSplitting)
      fail(Err::NoCentralPlane,
           std::string("no invariant plane tracks the pair: ") + e.what());
    throw;
  }
  const PlaneFrames& f = plan.frames;

  std::vector<double> weights(static_cast<size_t>(l), 1.0);
  if (step_mask)
    for (int n = 0; n < l; ++n)
      weights[static_cast<size_t>(n)] = (*step_mask)[static_cast<size_t>(n)] ? 1.0 : 0.0;
  double capsum = 0.0;
  for (int n = 0; n < l; ++n) {
    const double s = f.sens[static_cast<size_t>(n)];
    if (weights[static_cast<size_t>(n)] > 0.0 && std::isfinite(s) && s > 0.0)
      capsum += weights[static_cast<size_t>(n)] / s;
  }
  if (!(capsum > 0.0))
    fail(Err::InsufficientBudget,
         "no allowed orbit position can absorb a perturbation for this pair");
  const double cap_beta = kCapHeadroom * eps * capsum;

  // det0 > 0 for a real same-sign pair, so the parabolic locus sits at
  // |trace| = 2 sqrt(det); the target tucks just inside the complex region.
  const long double sgn = (f.trace0 < 0.0) ? -1.0L : 1.0L;
  const long double goal =
      2.0L * sqrtl(static_cast<long double>(f.det0)) * (1.0L - kComplexMargin);

  auto scaled_trace = [&](double beta) {
    plan.beta = beta;
    plan.gamma = plan_angles(f, beta, eps, &weights);
    const PeriodicCocycle sample = steered_sample(c, {plan}, 1.0);
    long double ls = 0.0L;
    const LMat2 g = plane_return(sample, f, &ls);
    return (g(0, 0) + g(1, 1)) *
           expl(ls - static_cast<long double>(f.log_ret_scale)) * sgn;
  };

  // Bisect the inserted angle: rotation drains |trace| monotonically toward
  // (and past) the parabolic locus; land on the >= side of the target so the
  // overshoot into the complex region stays within one ulp of the design.
  double beta_lo = 0.0, beta_hi = cap_beta;
  if (!(scaled_trace(0.0) > goal))
    fail(Err::PreconditionViolated,
         "the pair's return trace already sits at the parabolic locus "
         "without any certifiable margin");
  if (scaled_trace(beta_hi) > goal)
    fail(Err::InsufficientBudget,
         "the largest supported steering angle " + std::to_string(cap_beta) +
             " does not push the pair past the parabolic locus");
  for (int it = 0; it < 64 && beta_lo < beta_hi; ++it) {
    const double mid = 0.5 * (beta_lo + beta_hi);
    if (mid == beta_lo || mid == beta_hi) break;
    if (scaled_trace(mid) >= goal)
      beta_lo = mid;
    else
      beta_hi = mid;
  }
  // The kept side of the bisection is the real side; the endpoint must be the
  // first sample certifiably past the locus, so step to the far bracket.
  plan.beta = beta_hi;
  plan.gamma = plan_angles(f, beta_hi, eps, &weights);
  return assemble_path(c, {plan}, grid_points);
}

SftScanReport sft_domination_scan(const SftCocycle& s, int k, int max_period) {
  const int na = static_cast<int>(s.assignment.size());
  if (na < 1) fail(Err::MalformedInput, "the alphabet is empty");
  if (static_cast<int>(s.allowed.size()) != na)
    fail(Err::ShapeMismatch, "transition table size differs from the alphabet");
  for (const auto& row : s.allowed)
    if (static_cast<int>(row.size()) != na)
      fail(Err::ShapeMismatch, "transition table is not square");
  if (k < 1) fail(Err::PreconditionViolated, "domination strength k must be >= 1");
  if (max_period < 1 || max_period > 20)
    fail(Err::PreconditionViolated, "max_period must lie in 1..20");
  const int d = static_cast<int>(s.assignment.front().rows());
  for (const Mat& a : s.assignment) {
    if (a.rows() != d || a.cols() != d)
      fail(Err::ShapeMismatch, "assignment matrices must share one dimension");
    PeriodicCocycle probe({a});  // validates invertibility
  }

  SftScanReport rep;
  rep.k = k;
  rep.max_period = max_period;
  rep.uniform_at_index.assign(static_cast<size_t>(d - 1), 1);
  rep.failing_at_index.assign(static_cast<size_t>(d - 1), 0);
  int worst_score = d;  // dominated-index count of the worst word, minimized

  auto visit = [&](const std::vector<int>& w) {
    std::vector<Mat> steps;
    steps.reserve(w.size());
    for (int sym : w) steps.push_back(s.assignment[static_cast<size_t>(sym)]);
    const PeriodicCocycle c(std::move(steps));
    std::vector<char> dom(static_cast<size_t>(d - 1), 0);
    int score = 0;
    for (int i = 1; i < d; ++i) {
      bool ok = false;
      try {
        ok = check_k_domination(c, eigenspace_splitting(c, i), k);
      } catch (const CocycleError& e) {
        if (e.code != Err::NoInvariantSplitting) throw;
      }
      dom[static_cast<size_t>(i - 1)] = ok ? 1 : 0;
      if (ok) ++score;
      if (!ok) {
        rep.uniform_at_index[static_cast<size_t>(i - 1)] = 0;
        ++rep.failing_at_index[static_cast<size_t>(i - 1)];
      }
    }
    ++rep.words;
    // Enumeration goes by length, then lexicographically, so strict
    // improvement alone yields the shortest-then-smallest worst word.
    if (score < worst_score) {
      worst_score = score;
      rep.worst_word = w;
      rep.worst_dominated_at_index = dom;
    }
  };

  std::vector<int> w;
  for (int p = 1; p <= max_period; ++p) {
    w.assign(static_cast<size_t>(p), 0);
    // Depth-first over admissible words; necklace representatives only.
    int pos = 0;
    w[0] = -1;
    while (pos >= 0) {
      ++w[static_cast<size_t>(pos)];
      if (w[static_cast<size_t>(pos)] >= na) {
        --pos;
        continue;
      }
      const int sym = w[static_cast<size_t>(pos)];
      if (pos > 0) {
        if (sym < w[0]) continue;  // a rotation would start lower
        if (!s.allowed[static_cast<size_t>(w[static_cast<size_t>(pos - 1)])]
                      [static_cast<size_t>(sym)])
          continue;
      }
      if (pos + 1 == p) {
        if (s.allowed[static_cast<size_t>(sym)][static_cast<size_t>(w[0])] &&
            (p == 1 || is_lyndon(w)))
          visit(w);
        continue;
      }
      ++pos;
      w[static_cast<size_t>(pos)] = -1;
    }
  }
  if (rep.words == 0)
    fail(Err::EmptyLanguage,
         "the transition table admits no periodic word up to period " +
             std::to_string(max_period));
  rep.uniform = false;
  for (char u : rep.uniform_at_index) rep.uniform = rep.uniform || (u != 0);
  return rep;
}

}  // namespace cocyc
