#include "cocyc/cocycle.hpp"

#include <cmath>
#include <numeric>

#include "cocyc/product_spectrum.hpp"

namespace cocyc {

PeriodicCocycle::PeriodicCocycle(std::vector<Mat> steps, std::string label)
    : steps_(std::move(steps)), label_(std::move(label)) {
  if (steps_.empty()) fail(Err::InvalidCocycle, "period must be >= 1");
  dim_ = static_cast<int>(steps_[0].rows());
  if (dim_ < 2) fail(Err::InvalidCocycle, "dimension must be >= 2");
  inverses_.reserve(steps_.size());
  bound_ = 0.0;
  for (size_t n = 0; n < steps_.size(); ++n) {
    const Mat& a = steps_[n];
    if (a.rows() != dim_ || a.cols() != dim_)
      fail(Err::InvalidCocycle, "step " + std::to_string(n) + " is not " +
                                    std::to_string(dim_) + "x" + std::to_string(dim_));
    if (!a.allFinite())
      fail(Err::InvalidCocycle, "step " + std::to_string(n) + " has non-finite entries");
    Eigen::PartialPivLU<Mat> lu(a);
    const double adet = std::abs(lu.determinant());
    double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0 || adet < 1e-12 * std::pow(scale, dim_))
      fail(Err::InvalidCocycle, "step " + std::to_string(n) + " is numerically singular");
    inverses_.push_back(lu.inverse());
    bound_ = std::max(bound_, std::max(op_norm(a), op_norm(inverses_.back())));
  }
}

PeriodicCocycle PeriodicCocycle::inverse() const {
  std::vector<Mat> inv;
  inv.reserve(steps_.size());
  for (auto it = inverses_.rbegin(); it != inverses_.rend(); ++it) inv.push_back(*it);
  return PeriodicCocycle(std::move(inv), label_.empty() ? "" : label_ + "^-1");
}

PeriodicCocycle PeriodicCocycle::cyclic_shift(int shift) const {
  const int l = period();
  shift = ((shift % l) + l) % l;
  std::vector<Mat> rotated;
  rotated.reserve(steps_.size());
  for (int n = 0; n < l; ++n) rotated.push_back(steps_[static_cast<size_t>((n + shift) % l)]);
  return PeriodicCocycle(std::move(rotated), label_);
}

double PeriodicCocycle::mean_log_abs_det() const {
  long double acc = 0.0L;
  for (const Mat& a : steps_) {
    const double det = Eigen::PartialPivLU<Mat>(a).determinant();
    acc += std::log(std::abs(static_cast<long double>(det)));
  }
  return static_cast<double>(acc) / period();
}

double SpectrumReport::exponent_sum() const {
  long double acc = 0.0L;
  for (double e : exponents) acc += e;
  return static_cast<double>(acc);
}

SpectrumReport lyapunov_spectrum(const PeriodicCocycle& c, const Tolerances& tol) {
  ProductSpectrum ps = analyze_product(c);
  SpectrumReport rep;
  rep.dim = c.dim();
  rep.period = c.period();
  rep.multipliers = ps.multipliers;
  rep.exponents.reserve(rep.multipliers.size());
  rep.stable_index = 0;
  rep.hyperbolic = true;
  for (const Multiplier& m : rep.multipliers) {
    if (!std::isfinite(m.log_modulus))
      fail(Err::SingularProduct, "return product has a non-finite log-modulus");
    rep.exponents.push_back(m.log_modulus / c.period());
    if (m.log_modulus < 0) ++rep.stable_index;
    if (std::abs(std::expm1(m.log_modulus)) < tol.unit_circle) rep.hyperbolic = false;
  }
  return rep;
}

double cocycle_distance(const PeriodicCocycle& a, const PeriodicCocycle& b) {
  if (a.dim() != b.dim() || a.period() != b.period())
    fail(Err::ShapeMismatch, "cocycles differ in dimension or period");
  double d = 0.0;
  for (int n = 0; n < a.period(); ++n) {
    d = std::max(d, op_norm(a.step(n) - b.step(n)));
    d = std::max(d, op_norm(a.step_inverse(n) - b.step_inverse(n)));
  }
  return d;
}

}  // namespace cocyc
