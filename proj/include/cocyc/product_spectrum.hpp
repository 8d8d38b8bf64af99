#pragma once

#include <utility>
#include <vector>

#include "cocyc/cocycle.hpp"

namespace cocyc {

// Spectral data of the return product computed *without forming the product*:
// per-step QR orthogonal iteration separates modulus levels; level groups that
// refuse to separate (equal or near-equal moduli, conjugate pairs, defective
// blocks) are solved densely from the product of their diagonal blocks with
// per-step rescaling, so every log-modulus is accurate even when the product's
// eigenvalues span hundreds of orders of magnitude.  Cluster log-moduli are
// shifted to make their sum match sum_n log|det block_n| exactly, which keeps
// the whole spectrum determinant-consistent.
struct ProductSpectrum {
  // Increasing modulus order (ties: real first, then by real part, then
  // positive imaginary part first).
  std::vector<Multiplier> multipliers;
  std::vector<int> cluster_id;                  // per multiplier index
  std::vector<std::pair<int, int>> clusters;    // inclusive index ranges, increasing

  // split_available[i-1] == true  <=>  the i smallest multipliers are
  // separated from the rest by a genuine modulus gap AND the corresponding
  // invariant subspace pair was resolved (i in 1..d-1).
  std::vector<char> split_available;

  // One orthogonal d x d frame per orbit point; the leading k columns span the
  // *dominant* k-dimensional invariant subspace at that point whenever k is a
  // resolved boundary counted from the top (k = d - i for index-i splits).
  std::vector<Mat> flags;

  int sweeps = 0;

  bool split_at(int index) const {  // index = dim of the weak side, 1..d-1
    return index >= 1 && index < static_cast<int>(split_available.size()) + 1 &&
           split_available[static_cast<size_t>(index - 1)] != 0;
  }
};

ProductSpectrum analyze_product(const PeriodicCocycle& c, int max_sweeps = 2048);

}  // namespace cocyc
