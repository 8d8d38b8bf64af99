#pragma once

#include <vector>

#include "cocyc/cocycle.hpp"
#include "cocyc/paths.hpp"

namespace cocyc {

// A periodic orbit that dwells near a fixed saddle for n+1 steps, leaves
// through an r-step excursion, and does both a second time before closing.
struct TwoLoopSpec {
  Mat fixed;                    // hyperbolic return block at the saddle
  std::vector<Mat> transition;  // r >= 1 excursion steps
  int n = 1;                    // dwell length per loop
};

// The step sequence [fixed x (n+1), transition, fixed x (n+1), transition],
// period 2n+2+2r.  NotHyperbolic when `fixed` has a unit-modulus eigenvalue.
PeriodicCocycle build_two_loop_cocycle(const TwoLoopSpec& spec);

// 1 on the dwell positions (the copies of `fixed`), 0 on the excursion
// steps; lets path constructors concentrate their perturbation where the
// orbit lingers at the saddle.
std::vector<char> two_loop_dwell_mask(const TwoLoopSpec& spec);

// Sign of the determinant of the full-period return map restricted to the
// invariant plane of pair (j, j+1) (1-based).  NoCentralPlane when that
// plane does not separate from the rest of the spectrum.
int central_orientation_sign(const PeriodicCocycle& c, int j);

// Steers the real same-sign pair (j, j+1) into a non-real conjugate pair by
// distributing small rotations through the pair's invariant plane, keeping
// every other multiplier fixed.  `step_mask` (optional, one flag per orbit
// position) confines the perturbation to the marked positions.  A pair that
// is already a conjugate pair yields the constant path; opposite real signs
// raise OrientationObstruction, and a pair plane that does not separate
// raises NoCentralPlane.
CocyclePath make_complex(const PeriodicCocycle& c, int j, double eps,
                         int grid_points = 101,
                         const std::vector<char>* step_mask = nullptr);

// Locally constant cocycle over a subshift of finite type: symbol b may
// follow symbol a iff allowed[a][b]; symbol a contributes assignment[a].
struct SftCocycle {
  std::vector<std::vector<char>> allowed;  // square transition table
  std::vector<Mat> assignment;             // one invertible matrix per symbol
};

struct SftScanReport {
  int k = 0;
  int max_period = 0;
  long long words = 0;                  // primitive periodic words scanned
  std::vector<char> uniform_at_index;   // slot i-1: every word k-dominated at i
  bool uniform = false;                 // some index works for every word
  std::vector<long long> failing_at_index;  // words not dominated, per index
  // The least dominated word (fewest passing indices; ties to the shorter,
  // then lexicographically smaller word), with its per-index verdicts.
  std::vector<int> worst_word;
  std::vector<char> worst_dominated_at_index;
};

// Runs the k-domination test on every primitive periodic word of the
// subshift up to max_period (cap 20) and aggregates per splitting index.
// EmptyLanguage when the transition table admits no periodic word at all.
SftScanReport sft_domination_scan(const SftCocycle& s, int k, int max_period);

}  // namespace cocyc
