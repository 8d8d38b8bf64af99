#pragma once

#include <string>
#include <vector>

#include "cocyc/cocycle.hpp"

namespace cocyc {

// A polygonal family of cocycles t in [0,1] -> C_t, stored as samples on a
// finite grid.  Sample 0 is the base point itself; the radius is the largest
// sampled distance from the base.
class CocyclePath {
 public:
  CocyclePath(PeriodicCocycle base, std::vector<double> grid,
              std::vector<PeriodicCocycle> samples);

  static CocyclePath constant(const PeriodicCocycle& c, int grid_points);

  const PeriodicCocycle& base() const { return base_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<PeriodicCocycle>& samples() const { return samples_; }
  const PeriodicCocycle& endpoint() const { return samples_.back(); }
  double radius() const { return radius_; }

 private:
  PeriodicCocycle base_;
  std::vector<double> grid_;
  std::vector<PeriodicCocycle> samples_;
  double radius_ = 0.0;
};

enum class PathKind { Blend, Realify, Weaken, Collapse, Complexify };

const char* path_kind_name(PathKind k);

// What a synthesized path promises, in checkable form.  `index` is the
// 1-based position of the steered exponent pair's lower member (Blend,
// Weaken, Complexify); `sink` picks the target side for Collapse; `delta`
// is the Weaken window width.
struct PathContract {
  PathKind kind = PathKind::Blend;
  double epsilon = 0.0;
  int index = 0;
  double delta = 0.0;
  bool sink = true;
};

struct ClauseReport {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // signed; >= 0 iff the clause holds
};

struct ContractVerdict {
  bool pass = false;
  std::vector<ClauseReport> clauses;
};

// Moves exponents j and j+1 to their common mean along t, keeping the other
// exponents fixed and ending with an all-real spectrum.  The pair must be
// strictly ordered, the return product hyperbolic, and both exponents on the
// same side of zero; an already-tied pair yields the constant path.
CocyclePath blend_exponents(const PeriodicCocycle& c, int j, double eps,
                            int grid_points = 101);

// Rotates every conjugate multiplier pair to the real axis while keeping all
// exponents fixed.  An all-real spectrum yields the constant path.
CocyclePath realify(const PeriodicCocycle& c, double eps, int grid_points = 101);

// Raises a contracting exponent i (with expanding neighbour i+1) into the
// window (-delta, 0), landing on min((tau - delta)/2, -delta/2) where tau is
// the conserved pair sum; tau must exceed -delta.  An exponent already inside
// the window yields the constant path.
CocyclePath weaken_exponent(const PeriodicCocycle& c, int i, double delta,
                            double eps, int grid_points = 101);

// Drives every exponent strictly negative (sink) or strictly positive
// (source) by a cascade of pairwise blends; the exponent sum must already
// have the target sign.  Grid points count per cascade stage.
CocyclePath collapse_to_sink_or_source(const PeriodicCocycle& c, bool sink,
                                       double eps, int grid_points = 51);

// Joins two paths end to start; the first path's endpoint must equal the
// second path's base exactly.  Grids are packed into [0,1] proportionally.
CocyclePath concatenate(const CocyclePath& p, const CocyclePath& q);

// Re-derives every clause of the contract from the path's samples alone and
// reports each with its worst signed margin.
ContractVerdict verify_contract(const CocyclePath& p, const PathContract& contract,
                                const Tolerances& tol = {});

}  // namespace cocyc
