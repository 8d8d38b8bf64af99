#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cocyc/cocycle.hpp"

namespace cocyc {

struct PropertyCheck {
  bool holds = false;
  std::string witness;  // the decisive clause, human readable
};

// Spectral predicates evaluated on finished reports.  Exponent indices are
// 1-based, matching report order (smallest modulus first).
//
//   PairEqualAllReal(j):    chi_j == chi_{j+1}, isolated from the others, and
//                           every multiplier real.
//   WeakExponent(i, delta): chi_i lies in the open interval (-delta, 0).
//   PairComplexIsolated(j): chi_j == chi_{j+1}, isolated, and the pair is
//                           non-real.
//   GapBelowIndex(i):       chi_{i-1} < chi_i strictly (needs i >= 2).
//   PairSumNonnegative(i):  chi_i + chi_{i+1} >= 0.
//   ComplexPairDistinct(j): multipliers j, j+1 non-real and chi_j isolated
//                           from every other exponent.
enum class NamedProperty {
  PairEqualAllReal,
  WeakExponent,
  PairComplexIsolated,
  GapBelowIndex,
  PairSumNonnegative,
  ComplexPairDistinct,
};

PropertyCheck check_named_property(const SpectrumReport& rep,
                                   NamedProperty which, int index,
                                   double delta = 0.0,
                                   const Tolerances& tol = {});

// Two-sided saddle-pair condition: the first report must have
// chi_1 + chi_2 < 0 and the second chi_{d-1} + chi_d > 0.
PropertyCheck check_opposite_pair_sums(const SpectrumReport& weak_side,
                                       const SpectrumReport& strong_side);

struct SectionalDissipativity {
  bool forward = false;
  bool backward = false;
  // Smallest per-step rate alpha with every consecutive modulus pair product
  // below alpha^period across all reports; set only when forward holds.
  std::optional<double> uniform_alpha;
};

SectionalDissipativity check_sectional_dissipativity(
    const std::vector<SpectrumReport>& reports);

}  // namespace cocyc
