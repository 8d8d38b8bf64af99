#include "cocyc/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cocyc/errors.hpp"

namespace cocyc {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// chi_j isolated: every exponent outside {j, j+1} differs from chi_j beyond
// the equality tolerance.  1-based j.
bool pair_isolated(const SpectrumReport& rep, int j, double tol,
                   std::string* witness) {
  const double cj = rep.exponents[static_cast<size_t>(j - 1)];
  for (int m = 1; m <= rep.dim; ++m) {
    if (m == j || m == j + 1) continue;
    const double cm = rep.exponents[static_cast<size_t>(m - 1)];
    if (std::abs(cm - cj) <= tol) {
      *witness = "exponent " + std::to_string(m) + " = " + fmt(cm) +
                 " collides with exponent " + std::to_string(j);
      return false;
    }
  }
  return true;
}

}  // namespace

PropertyCheck check_named_property(const SpectrumReport& rep,
                                   NamedProperty which, int index,
                                   double delta, const Tolerances& tol) {
  const int d = rep.dim;
  PropertyCheck out;
  auto need = [&](int lo, int hi) {
    if (index < lo || index > hi)
      fail(Err::IndexOutOfRange, "property index out of range");
  };
  switch (which) {
    case NamedProperty::PairEqualAllReal: {
      need(1, d - 1);
      const double cj = rep.exponents[static_cast<size_t>(index - 1)];
      const double cj1 = rep.exponents[static_cast<size_t>(index)];
      if (std::abs(cj - cj1) > tol.equality) {
        out.witness = "exponents " + std::to_string(index) + "," +
                      std::to_string(index + 1) + " differ: " + fmt(cj) +
                      " vs " + fmt(cj1);
        return out;
      }
      if (!pair_isolated(rep, index, tol.equality, &out.witness)) return out;
      for (int m = 1; m <= d; ++m) {
        if (!rep.multipliers[static_cast<size_t>(m - 1)].is_real()) {
          out.witness = "multiplier " + std::to_string(m) + " is non-real";
          return out;
        }
      }
      out.holds = true;
      out.witness = "equal isolated pair at " + std::to_string(index) +
                    ", all multipliers real";
      return out;
    }
    case NamedProperty::WeakExponent: {
      need(1, d);
      if (!(delta > 0.0))
        fail(Err::PreconditionViolated, "delta must be positive");
      const double ci = rep.exponents[static_cast<size_t>(index - 1)];
      if (ci > -delta && ci < 0.0) {
        out.holds = true;
        out.witness = "exponent " + std::to_string(index) + " = " + fmt(ci) +
                      " inside (-" + fmt(delta) + ", 0)";
      } else {
        out.witness = "exponent " + std::to_string(index) + " = " + fmt(ci) +
                      " outside (-" + fmt(delta) + ", 0)";
      }
      return out;
    }
    case NamedProperty::PairComplexIsolated: {
      need(1, d - 1);
      const double cj = rep.exponents[static_cast<size_t>(index - 1)];
      const double cj1 = rep.exponents[static_cast<size_t>(index)];
      if (std::abs(cj - cj1) > tol.equality) {
        out.witness = "exponents " + std::to_string(index) + "," +
                      std::to_string(index + 1) + " differ: " + fmt(cj) +
                      " vs " + fmt(cj1);
        return out;
      }
      if (!pair_isolated(rep, index, tol.equality, &out.witness)) return out;
      if (rep.multipliers[static_cast<size_t>(index - 1)].is_real() ||
          rep.multipliers[static_cast<size_t>(index)].is_real()) {
        out.witness = "pair at " + std::to_string(index) + " is real";
        return out;
      }
      out.holds = true;
      out.witness = "isolated non-real pair at " + std::to_string(index);
      return out;
    }
    case NamedProperty::GapBelowIndex: {
      need(2, d);
      const double lo = rep.exponents[static_cast<size_t>(index - 2)];
      const double hi = rep.exponents[static_cast<size_t>(index - 1)];
      // strict gap: beyond the equality tolerance, not just rounding noise
      out.holds = lo < hi - tol.equality;
      out.witness = "exponent " + std::to_string(index - 1) + " = " + fmt(lo) +
                    (out.holds ? " < " : " !< ") + fmt(hi) + " = exponent " +
                    std::to_string(index);
      return out;
    }
    case NamedProperty::PairSumNonnegative: {
      need(1, d - 1);
      const double sum = rep.exponents[static_cast<size_t>(index - 1)] +
                         rep.exponents[static_cast<size_t>(index)];
      // ">= 0" up to rounding: an exactly conservative pair must pass
      out.holds = sum >= -tol.equality;
      out.witness = "exponent sum at " + std::to_string(index) + " = " +
                    fmt(sum) + (out.holds ? " >= 0" : " < 0");
      return out;
    }
    case NamedProperty::ComplexPairDistinct: {
      need(1, d - 1);
      if (rep.multipliers[static_cast<size_t>(index - 1)].is_real() ||
          rep.multipliers[static_cast<size_t>(index)].is_real()) {
        out.witness = "multiplier pair at " + std::to_string(index) +
                      " is not non-real";
        return out;
      }
      if (!pair_isolated(rep, index, 1e-9, &out.witness)) return out;
      out.holds = true;
      out.witness = "non-real pair at " + std::to_string(index) +
                    " isolated from the rest";
      return out;
    }
  }
  fail(Err::PreconditionViolated, "unknown property");
}

PropertyCheck check_opposite_pair_sums(const SpectrumReport& weak_side,
                                       const SpectrumReport& strong_side) {
  PropertyCheck out;
  if (weak_side.dim < 2 || strong_side.dim < 2)
    fail(Err::IndexOutOfRange, "need dimension at least 2");
  const double lo = weak_side.exponents[0] + weak_side.exponents[1];
  const double hi =
      strong_side.exponents[static_cast<size_t>(strong_side.dim - 2)] +
      strong_side.exponents[static_cast<size_t>(strong_side.dim - 1)];
  if (!(lo < 0.0)) {
    out.witness = "bottom pair sum " + fmt(lo) + " not < 0";
    return out;
  }
  if (!(hi > 0.0)) {
    out.witness = "top pair sum " + fmt(hi) + " not > 0";
    return out;
  }
  out.holds = true;
  out.witness = "bottom pair sum " + fmt(lo) + " < 0 and top pair sum " +
                fmt(hi) + " > 0";
  return out;
}

SectionalDissipativity check_sectional_dissipativity(
    const std::vector<SpectrumReport>& reports) {
  SectionalDissipativity out;
  if (reports.empty()) return out;
  double worst_fwd = -std::numeric_limits<double>::infinity();
  double worst_bwd = -std::numeric_limits<double>::infinity();
  for (const auto& rep : reports) {
    for (int i = 0; i + 1 < rep.dim; ++i) {
      const double s = rep.exponents[static_cast<size_t>(i)] +
                       rep.exponents[static_cast<size_t>(i + 1)];
      worst_fwd = std::max(worst_fwd, s);
      worst_bwd = std::max(worst_bwd, -s);
    }
  }
  out.forward = worst_fwd < 0.0;
  out.backward = worst_bwd < 0.0;
  if (out.forward) out.uniform_alpha = std::exp(worst_fwd);
  return out;
}

}  // namespace cocyc
