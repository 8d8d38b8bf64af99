#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cocyc/cocycle.hpp"
#include "cocyc/product_spectrum.hpp"

using namespace cocyc;

namespace {

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

PeriodicCocycle random_cocycle(std::mt19937& rng, int d, int l) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Mat> steps;
  steps.reserve(static_cast<size_t>(l));
  while (static_cast<int>(steps.size()) < l) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = u(rng);
    double scale = m.cwiseAbs().maxCoeff();
    if (std::abs(m.determinant()) < 1e-6 * std::pow(scale, d)) continue;
    steps.push_back(m);
  }
  return PeriodicCocycle(std::move(steps));
}

}  // namespace

TEST_CASE("single diagonal step: exact exponents, order, stability") {
  PeriodicCocycle c({diag2(2.0, 0.5)});
  auto rep = lyapunov_spectrum(c);
  REQUIRE(rep.multipliers.size() == 2);
  CHECK(rep.exponents[0] == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(rep.exponents[1] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(rep.multipliers[0].is_real());
  CHECK(rep.multipliers[1].is_real());
  CHECK(rep.multipliers[0].unit.real() == doctest::Approx(1.0));
  CHECK(rep.stable_index == 1);
  CHECK(rep.hyperbolic);
}

TEST_CASE("scaled quarter turn: conjugate pair, positive imaginary first") {
  Mat m(2, 2);
  m << 0.0, -2.0, 2.0, 0.0;
  PeriodicCocycle c({m});
  auto rep = lyapunov_spectrum(c);
  REQUIRE(rep.multipliers.size() == 2);
  CHECK(rep.exponents[0] == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(rep.exponents[1] == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK_FALSE(rep.multipliers[0].is_real());
  CHECK(rep.multipliers[0].unit.imag() > 0.0);
  CHECK(rep.multipliers[1].unit.imag() == -rep.multipliers[0].unit.imag());
  CHECK(rep.multipliers[1].unit.real() == rep.multipliers[0].unit.real());
  CHECK(rep.stable_index == 0);
  CHECK(rep.hyperbolic);
}

TEST_CASE("unit modulus direction blocks hyperbolicity") {
  PeriodicCocycle c({diag2(0.9, 1.0)});
  auto rep = lyapunov_spectrum(c);
  CHECK_FALSE(rep.hyperbolic);
  CHECK(rep.stable_index == 1);
  CHECK(rep.exponents[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("plane rotation: non-hyperbolic complex pair on the unit circle") {
  Mat m(2, 2);
  double t = 1.0;
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  PeriodicCocycle c({m});
  auto rep = lyapunov_spectrum(c);
  CHECK_FALSE(rep.hyperbolic);
  CHECK(std::abs(rep.exponents[0]) < 1e-12);
  CHECK(std::abs(rep.exponents[1]) < 1e-12);
  CHECK_FALSE(rep.multipliers[0].is_real());
}

TEST_CASE("defective repeated multiplier: equal moduli recovered") {
  Mat m(2, 2);
  m << 1.5, 1.0, 0.0, 1.5;
  PeriodicCocycle c({m});
  auto rep = lyapunov_spectrum(c);
  // A defective eigenvalue has condition ~ eps^(1/2): individual moduli are
  // only good to ~1e-7, but their sum stays determinant-exact.
  CHECK(std::abs(rep.exponents[0] - std::log(1.5)) < 1e-7);
  CHECK(std::abs(rep.exponents[1] - std::log(1.5)) < 1e-7);
  CHECK(rep.exponents[0] <= rep.exponents[1]);
  CHECK(std::abs(rep.exponent_sum() - 2.0 * std::log(1.5)) < 1e-13);
  CHECK(rep.stable_index == 0);
}

TEST_CASE("long contracting product stays exact in the log domain") {
  std::vector<Mat> steps(200, diag2(0.1, 0.2));
  PeriodicCocycle c(std::move(steps));
  auto rep = lyapunov_spectrum(c);
  // The raw product has entries around 1e-200 and 1e-140; exponents must not
  // lose accuracy to underflow.
  CHECK(rep.exponents[0] == doctest::Approx(std::log(0.1)).epsilon(1e-12));
  CHECK(rep.exponents[1] == doctest::Approx(std::log(0.2)).epsilon(1e-12));
  CHECK(rep.stable_index == 2);
  CHECK(rep.hyperbolic);
}

TEST_CASE("three blocks: split availability tracks the spectral gaps") {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = 0.8 * std::cos(0.7);
  m(0, 1) = -0.8 * std::sin(0.7);
  m(1, 0) = 0.8 * std::sin(0.7);
  m(1, 1) = 0.8 * std::cos(0.7);
  m(2, 2) = 2.0;
  PeriodicCocycle c({m});
  auto ps = analyze_product(c);
  REQUIRE(ps.multipliers.size() == 3);
  CHECK(ps.multipliers[0].log_modulus == doctest::Approx(std::log(0.8)).epsilon(1e-12));
  CHECK(ps.multipliers[1].log_modulus == doctest::Approx(std::log(0.8)).epsilon(1e-12));
  CHECK(ps.multipliers[2].log_modulus == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_FALSE(ps.multipliers[0].is_real());
  CHECK(ps.multipliers[2].is_real());
  CHECK_FALSE(ps.split_at(1));  // would cut the conjugate pair
  CHECK(ps.split_at(2));        // pair below, real direction above
  // The dominant 1-dimensional flag at the (single) orbit point is the e3 axis.
  REQUIRE(ps.flags.size() == 1);
  Vec top = ps.flags[0].col(0);
  CHECK(std::abs(std::abs(top(2)) - 1.0) < 1e-9);
}

TEST_CASE("diagonal steps aligned with the identity still sort by modulus") {
  // Orthogonal iteration must not stick to the wrongly ordered invariant
  // arrangement that the coordinate axes offer it.
  PeriodicCocycle c({diag2(0.5, 2.0)});
  auto ps = analyze_product(c);
  CHECK(ps.multipliers[0].log_modulus == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(ps.multipliers[1].log_modulus == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(ps.split_at(1));
  Vec top = ps.flags[0].col(0);
  CHECK(std::abs(std::abs(top(1)) - 1.0) < 1e-9);  // dominant flag = e2 axis
}

TEST_CASE("exactly tied moduli expose no split") {
  PeriodicCocycle c({diag2(1.0, 1.0)});
  auto ps = analyze_product(c);
  CHECK(ps.multipliers[0].log_modulus == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(ps.multipliers[1].log_modulus == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_FALSE(ps.split_at(1));
}

TEST_CASE("determinant identity holds to 1e-10 across random cocycles") {
  std::mt19937 rng(20260818u);
  std::uniform_int_distribution<int> dd(2, 6);
  std::uniform_int_distribution<int> ll(1, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_cocycle(rng, dd(rng), ll(rng));
    auto rep = lyapunov_spectrum(c);
    REQUIRE(static_cast<int>(rep.exponents.size()) == c.dim());
    for (size_t i = 0; i + 1 < rep.exponents.size(); ++i)
      CHECK(rep.exponents[i] <= rep.exponents[i + 1] + 1e-12);
    const double gap = std::abs(rep.exponent_sum() - c.mean_log_abs_det());
    worst = std::max(worst, gap);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("conjugate multipliers come in adjacent exact pairs") {
  std::mt19937 rng(777u);
  for (int trial = 0; trial < 60; ++trial) {
    auto c = random_cocycle(rng, 4, 12);
    auto rep = lyapunov_spectrum(c);
    for (size_t i = 0; i < rep.multipliers.size(); ++i) {
      const auto& mu = rep.multipliers[i];
      if (mu.is_real()) continue;
      if (mu.unit.imag() > 0.0) {
        REQUIRE(i + 1 < rep.multipliers.size());
        const auto& nu = rep.multipliers[i + 1];
        CHECK(nu.unit.real() == mu.unit.real());
        CHECK(nu.unit.imag() == -mu.unit.imag());
        CHECK(nu.log_modulus == mu.log_modulus);
      }
    }
  }
}

TEST_CASE("cyclic shift preserves the spectrum") {
  std::mt19937 rng(1234u);
  auto c = random_cocycle(rng, 3, 17);
  auto rep = lyapunov_spectrum(c);
  for (int shift : {1, 5, 16}) {
    auto rep2 = lyapunov_spectrum(c.cyclic_shift(shift));
    for (int i = 0; i < 3; ++i)
      CHECK(rep2.exponents[static_cast<size_t>(i)] ==
            doctest::Approx(rep.exponents[static_cast<size_t>(i)]).epsilon(1e-9));
  }
}

TEST_CASE("inverse dynamics negates and reverses the exponent list") {
  std::mt19937 rng(4321u);
  auto c = random_cocycle(rng, 4, 9);
  auto rep = lyapunov_spectrum(c);
  auto rev = lyapunov_spectrum(c.inverse());
  const size_t d = rep.exponents.size();
  for (size_t i = 0; i < d; ++i)
    CHECK(rev.exponents[i] ==
          doctest::Approx(-rep.exponents[d - 1 - i]).epsilon(5e-9));
}

TEST_CASE("strong expansion and contraction in one long word") {
  // 64 steps alternating strong stretch directions: multiplier moduli span a
  // range far beyond double, forcing the log-domain path.
  std::vector<Mat> steps;
  for (int n = 0; n < 64; ++n) {
    Mat m = diag2(std::exp(4.0), std::exp(-4.0));
    steps.push_back(m);
  }
  PeriodicCocycle c(std::move(steps));
  auto rep = lyapunov_spectrum(c);
  CHECK(rep.exponents[0] == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(rep.exponents[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(rep.exponent_sum() - c.mean_log_abs_det()) < 1e-12);
}
