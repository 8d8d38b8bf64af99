#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cocyc/errors.hpp"
#include "cocyc/linalg.hpp"

namespace cocyc {

struct Tolerances {
  double unit_circle = 1e-9;   // |modulus - 1| below this => not hyperbolic
  double equality = 1e-9;      // exponent / subspace comparisons
  double conservation = 1e-8;  // conserved-quantity drift along paths
  double separation = 1e-6;    // "distinct from the others" margins
};

// An ordered finite family of invertible d x d matrices, applied A_0 first.
// Immutable after construction; every invariant is checked up front.
class PeriodicCocycle {
 public:
  PeriodicCocycle(std::vector<Mat> steps, std::string label = "");

  int dim() const { return dim_; }
  int period() const { return static_cast<int>(steps_.size()); }
  const Mat& step(int n) const { return steps_[static_cast<size_t>(n)]; }
  const Mat& step_inverse(int n) const { return inverses_[static_cast<size_t>(n)]; }
  const std::vector<Mat>& steps() const { return steps_; }
  const std::string& label() const { return label_; }

  // max_n max(||A_n||, ||A_n^-1||), operator norm; computed at construction.
  double bound() const { return bound_; }

  // Cocycle with steps A_{l-1}^-1, ..., A_0^-1 (the inverse dynamics).
  PeriodicCocycle inverse() const;

  // Steps rotated so old index `shift` becomes index 0.
  PeriodicCocycle cyclic_shift(int shift) const;

  // (1/l) * sum_n log |det A_n|  ==  (1/l) log |det(return product)|, exact in
  // the log domain regardless of overflow of the product itself.
  double mean_log_abs_det() const;

 private:
  std::vector<Mat> steps_;
  std::vector<Mat> inverses_;
  int dim_ = 0;
  double bound_ = 0.0;
  std::string label_;
};

struct Multiplier {
  double log_modulus = 0.0;            // log |lambda|, exact in log domain
  std::complex<double> unit{1.0, 0.0}; // lambda / |lambda|; Im == 0 iff real
  bool is_real() const { return unit.imag() == 0.0; }
  // lambda itself; may overflow/underflow double range for extreme cocycles.
  std::complex<double> value() const { return std::exp(log_modulus) * unit; }
};

struct SpectrumReport {
  int dim = 0;
  int period = 0;
  // Ordered by nondecreasing modulus; ties: real before complex, then by real
  // part, then positive imaginary part first.  Conjugate pairs are adjacent
  // and exactly symmetric.
  std::vector<Multiplier> multipliers;
  std::vector<double> exponents;  // chi_i = log|lambda_i| / period, same order
  int stable_index = 0;           // #{ |lambda_i| < 1 }
  bool hyperbolic = false;        // no modulus within tol.unit_circle of 1

  double exponent_sum() const;
};

SpectrumReport lyapunov_spectrum(const PeriodicCocycle& c,
                                 const Tolerances& tol = {});

// sup_n max(||A_n - B_n||, ||A_n^-1 - B_n^-1||); ShapeMismatch if dims differ.
double cocycle_distance(const PeriodicCocycle& a, const PeriodicCocycle& b);

}  // namespace cocyc
