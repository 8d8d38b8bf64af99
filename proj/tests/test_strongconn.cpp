#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cocyc/cocycle.hpp"
#include "cocyc/errors.hpp"
#include "cocyc/strong_connection.hpp"

using namespace cocyc;

namespace {

Eigen::Matrix2d rot2d(double th) {
  Eigen::Matrix2d m;
  m << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return m;
}

CenterStableModel model(const Eigen::Matrix2d& b, double sx = 1.0,
                        double sy = 0.0) {
  CenterStableModel m;
  m.block = b;
  m.seed = Eigen::Vector2d(sx, sy);
  return m;
}

Eigen::Matrix2d jordan(double lam, double shear = 1.0) {
  Eigen::Matrix2d j;
  j << lam, shear, 0.0, lam;
  return j;
}

SpectrumReport diag_spectrum(const std::vector<double>& rates) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(
      static_cast<int>(rates.size()), static_cast<int>(rates.size()));
  for (int i = 0; i < m.rows(); ++i)
    m(i, i) = std::exp(rates[static_cast<size_t>(i)]);
  return lyapunov_spectrum(PeriodicCocycle({Eigen::MatrixXd(m)}));
}

}  // namespace

TEST_CASE("scalar, shear, and rotation blocks classify as expected") {
  CHECK(classify_center(model(Eigen::Matrix2d(0.5 * Eigen::Matrix2d::Identity()))) ==
        CenterClass::Homothety);
  CHECK(classify_center(model(jordan(0.5))) == CenterClass::Parabolic);
  CHECK(classify_center(model(Eigen::Matrix2d(0.5 * rot2d(0.3)))) ==
        CenterClass::Complex);
}

TEST_CASE("negative scalars and negative shears classify too") {
  CHECK(classify_center(model(Eigen::Matrix2d(-0.5 * Eigen::Matrix2d::Identity()))) ==
        CenterClass::Homothety);
  CHECK(classify_center(model(jordan(-0.5, 2.0))) == CenterClass::Parabolic);
}

TEST_CASE("blocks outside the model are rejected") {
  Eigen::Matrix2d unequal;
  unequal << 0.3, 0, 0, 0.5;
  Eigen::Matrix2d opposite;
  opposite << 0.5, 0, 0, -0.5;
  Eigen::Matrix2d big = 1.5 * Eigen::Matrix2d::Identity();
  Eigen::Matrix2d unit = rot2d(0.3);  // rotating pair on the unit circle
  for (const Eigen::Matrix2d& b : {unequal, opposite, big, unit}) {
    try {
      classify_center(model(b));
      CHECK(false);
    } catch (const CocycleError& e) {
      CHECK(e.code == Err::InvariantViolation);
    }
  }
}

TEST_CASE("classification is invariant under orthogonal conjugation") {
  std::mt19937 rng(20260818);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  const Eigen::Matrix2d reps[3] = {
      Eigen::Matrix2d(0.7 * Eigen::Matrix2d::Identity()), jordan(0.6, 3.0),
      Eigen::Matrix2d(0.8 * rot2d(0.9))};
  const CenterClass want[3] = {CenterClass::Homothety, CenterClass::Parabolic,
                               CenterClass::Complex};
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix2d q = rot2d(ang(rng));
    for (int c = 0; c < 3; ++c) {
      const Eigen::Matrix2d conj = q.transpose() * reps[c] * q;
      CHECK(classify_center(model(conj)) == want[c]);
    }
  }
}

TEST_CASE("trichotomy is exclusive on random valid blocks") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> pick(0.0, 3.0);
  std::uniform_real_distribution<double> shear(0.2, 5.0);
  int seen[3] = {0, 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    const double s = (pick(rng) < 1.5) ? 1.0 : -1.0;
    const double l = s * lam(rng);
    Eigen::Matrix2d b;
    const double which = pick(rng);
    if (which < 1.0)
      b = l * Eigen::Matrix2d::Identity();
    else if (which < 2.0)
      b = jordan(l, shear(rng));
    else
      b = std::abs(l) * rot2d(ang(rng));
    const Eigen::Matrix2d q = rot2d(ang(rng));
    const CenterClass got = classify_center(model(q.transpose() * b * q));
    ++seen[static_cast<int>(got)];
    if (which < 1.0) CHECK(got == CenterClass::Homothety);
    else if (which < 2.0) CHECK(got == CenterClass::Parabolic);
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}

TEST_CASE("shear iteration lands near the invariant axis") {
  const CenterStableModel m = model(jordan(0.5), 0.0, 1.0);
  const IterationReport rep = normalized_iteration_limit(m, 1000);
  CHECK(rep.cls == CenterClass::Parabolic);
  CHECK(rep.angle_to_invariant < 2e-3);
  CHECK(rep.direction.x() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("homothety returns the canonicalized seed at angle zero") {
  const CenterStableModel m =
      model(Eigen::Matrix2d(0.5 * Eigen::Matrix2d::Identity()), 3.0, 4.0);
  const IterationReport rep = normalized_iteration_limit(m, 10);
  CHECK(rep.direction.x() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(rep.direction.y() == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(rep.angle_to_invariant == 0.0);

  CenterStableModel neg = m;
  neg.seed = -neg.seed;
  const IterationReport rep2 = normalized_iteration_limit(neg, 10);
  CHECK(rep2.direction.x() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(rep2.direction.y() == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("homothety iterates do not depend on the step count") {
  const CenterStableModel m =
      model(Eigen::Matrix2d(-0.7 * Eigen::Matrix2d::Identity()), 1.0, 2.0);
  const IterationReport a = normalized_iteration_limit(m, 1);
  const IterationReport b = normalized_iteration_limit(m, 1000);
  CHECK(a.direction == b.direction);
  CHECK(a.angle_to_invariant == b.angle_to_invariant);
}

TEST_CASE("a seed on the invariant axis stays at angle zero") {
  for (int steps : {1, 10, 100}) {
    const IterationReport rep =
        normalized_iteration_limit(model(jordan(0.5), 1.0, 0.0), steps);
    CHECK(rep.angle_to_invariant == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rep.direction.x() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("parabolic convergence follows the one-over-steps law") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Matrix2d q = rot2d(ang(rng));
    const Eigen::Matrix2d b = q.transpose() * jordan(0.5, 1.0) * q;
    const double sa = ang(rng);
    double lo = 1e300, hi = 0.0;
    for (int s : {100, 1000, 10000, 100000}) {
      const IterationReport rep = normalized_iteration_limit(
          model(b, std::cos(sa), std::sin(sa)), s);
      const double scaled = rep.angle_to_invariant * s;
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 4.0);
  }
}

TEST_CASE("iteration rejects bad seeds, step counts, and rotating blocks") {
  try {
    normalized_iteration_limit(model(jordan(0.5), 0.0, 0.0), 10);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::ZeroSeed);
  }
  try {
    normalized_iteration_limit(model(jordan(0.5)), 0);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::PreconditionViolated);
  }
  try {
    normalized_iteration_limit(model(Eigen::Matrix2d(0.5 * rot2d(1.0))), 10);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::PreconditionViolated);
  }
}

TEST_CASE("interface verdict needs both the gap and the direction") {
  const SpectrumReport rep = diag_spectrum({-0.8, -0.3, 0.4});
  const SurrogateVerdict yes = check_pss_spectral_and_directional(rep, 2, 0.0);
  CHECK(yes.holds);
  CHECK(yes.spectral_gap == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(yes.direction_within);
  CHECK(!yes.note.empty());

  const SurrogateVerdict far =
      check_pss_spectral_and_directional(rep, 2, 1e-3);
  CHECK(!far.holds);
  CHECK(!far.direction_within);

  const SpectrumReport tied = diag_spectrum({-0.5, -0.5, 0.4});
  const SurrogateVerdict gapless =
      check_pss_spectral_and_directional(tied, 2, 0.0);
  CHECK(!gapless.holds);
  CHECK(gapless.direction_within);
}

TEST_CASE("interface verdict accepts an iterated shear angle once small") {
  const SpectrumReport rep = diag_spectrum({-0.8, -0.3, 0.4});
  const CenterStableModel m = model(jordan(0.5), 0.0, 1.0);
  const double coarse =
      normalized_iteration_limit(m, 10000).angle_to_invariant;
  CHECK(!check_pss_spectral_and_directional(rep, 2, coarse).holds);
  const double fine =
      normalized_iteration_limit(m, 1000000).angle_to_invariant;
  CHECK(fine < 1e-6);
  CHECK(check_pss_spectral_and_directional(rep, 2, fine).holds);
}

TEST_CASE("interface index must be interior") {
  const SpectrumReport rep = diag_spectrum({-0.8, -0.3, 0.4});
  CHECK_THROWS_AS(check_pss_spectral_and_directional(rep, 1, 0.0),
                  CocycleError);
  CHECK_THROWS_AS(check_pss_spectral_and_directional(rep, 3, 0.0),
                  CocycleError);
}

TEST_CASE("class names are stable strings") {
  CHECK(std::string(center_class_name(CenterClass::Homothety)) == "homothety");
  CHECK(std::string(center_class_name(CenterClass::Parabolic)) == "parabolic");
  CHECK(std::string(center_class_name(CenterClass::Complex)) == "complex");
}
