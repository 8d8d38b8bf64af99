#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cocyc/cocycle.hpp"

namespace cocyc {

// Complementary invariant subspaces along the orbit: at each point, `weak`
// carries the `index` smallest-modulus directions and `strong` the rest, both
// as orthonormal column bases transported consistently by the cocycle.
struct SplittingAlongOrbit {
  int index = 0;
  std::vector<Mat> weak;    // d x index per orbit point
  std::vector<Mat> strong;  // d x (d - index) per orbit point
};

// The sorted eigenspace splitting of the return product, transported to every
// orbit point.  Fails NoInvariantSplitting when the modulus levels do not
// separate at this index (tie, unresolved cluster, or fibers too close to
// parallel), IndexOutOfRange for index outside 1..d-1.
SplittingAlongOrbit eigenspace_splitting(const PeriodicCocycle& c, int index);

// Throws InvalidSplitting unless each step maps weak/strong fibers onto the
// next ones within `tol` in span distance.
void require_invariant(const PeriodicCocycle& c, const SplittingAlongOrbit& s,
                       double tol = 1e-9);

struct DominationProbe {
  bool dominated = false;
  double worst_log_ratio = 0.0;  // max over points of log(norm/conorm ratio)
  int worst_position = 0;
};

// Ratio test with window k at every orbit point: the k-step composition must
// stretch every strong-fiber vector at least twice as much as any weak-fiber
// vector (operator norm over the weak side vs. minimal singular value over
// the strong side, evaluated in the log domain so extreme products never
// overflow).
DominationProbe probe_k_domination(const PeriodicCocycle& c,
                                   const SplittingAlongOrbit& s, int k);
bool check_k_domination(const PeriodicCocycle& c, const SplittingAlongOrbit& s,
                        int k);

struct IndexDomination {
  int index = 0;
  bool splitting_exists = false;
  std::optional<int> minimal_k;  // empty: none found up to the cap
  std::string reason;            // set when splitting_exists is false
};

struct DominationReport {
  int k_max = 0;
  std::vector<IndexDomination> per_index;  // indices 1..d-1 in order
};

// Minimal domination window per splitting index, capped at k_max.
DominationReport domination_scan(const PeriodicCocycle& c, int k_max = 64);

struct ChainDominationReport {
  std::vector<int> interfaces;   // cumulative dimensions, one per verdict
  std::vector<bool> dominated;   // same length as interfaces
  int k = 0;
};

// One domination verdict per interface of the multi-bundle partition `dims`
// (entries positive, at least two, summing to d), all with the same window k.
ChainDominationReport check_chain_domination(const PeriodicCocycle& c,
                                             const std::vector<int>& dims,
                                             int k);

}  // namespace cocyc
