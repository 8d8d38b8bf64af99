#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cocyc/cocycle.hpp"
#include "cocyc/errors.hpp"
#include "cocyc/paths.hpp"
#include "cocyc/splitting.hpp"
#include "cocyc/two_loop.hpp"

using namespace cocyc;

namespace {

Mat rotm(double th) {
  Mat m(2, 2);
  m << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return m;
}

// Contracting plane plus an expanding transversal; the excursion swaps the
// plane axes, so the one-loop restricted return has negative determinant.
Mat saddle3() {
  Mat f = Mat::Zero(3, 3);
  f(0, 0) = 0.7;
  f(1, 1) = 0.7;
  f(2, 2) = 2.5;
  return f;
}

Mat swap12() {
  Mat t = Mat::Zero(3, 3);
  t(0, 1) = 1.0;
  t(1, 0) = 1.0;
  t(2, 2) = 1.0;
  return t;
}

TwoLoopSpec saddle_spec(int n) {
  TwoLoopSpec s;
  s.fixed = saddle3();
  s.transition = {swap12()};
  s.n = n;
  return s;
}

// The matching one-loop cocycle: n+1 dwell steps and one excursion.
PeriodicCocycle single_loop(const TwoLoopSpec& s) {
  std::vector<Mat> steps;
  for (int i = 0; i <= s.n; ++i) steps.push_back(s.fixed);
  for (const Mat& t : s.transition) steps.push_back(t);
  return PeriodicCocycle(std::move(steps));
}

// Weak-contrast excursion: one transition cannot push a window ratio below
// one half, two can, so the minimal window length tracks the full two-loop
// dwell and outgrows any fixed cap as the dwell lengthens.
TwoLoopSpec weak_contrast_spec(int n) {
  TwoLoopSpec s;
  s.fixed = 0.9 * rotm(0.3025);
  Mat t = Mat::Zero(2, 2);
  t(0, 0) = 1.35;
  t(1, 1) = 1.0 / 1.35;
  s.transition = {t};
  s.n = n;
  return s;
}

bool clause_passed(const ContractVerdict& v, const std::string& name) {
  for (const auto& c : v.clauses)
    if (c.name == name) return c.pass;
  return false;
}

}  // namespace

TEST_CASE("two-loop period is twice dwell plus excursion") {
  for (int n : {1, 3, 7}) {
    for (int r : {1, 2, 4}) {
      TwoLoopSpec s;
      s.fixed = Mat(2, 2);
      s.fixed << 0.5, 0, 0, 2.0;
      s.transition.assign(static_cast<size_t>(r), Mat(Mat::Identity(2, 2)));
      s.n = n;
      const PeriodicCocycle c = build_two_loop_cocycle(s);
      CHECK(c.period() == 2 * n + 2 + 2 * r);
    }
  }
}

TEST_CASE("identity excursions dilute the fixed-point rates") {
  TwoLoopSpec s;
  s.fixed = Mat(2, 2);
  s.fixed << 0.5, 0, 0, 2.0;
  s.transition = {Mat(Mat::Identity(2, 2))};
  s.n = 1;
  const PeriodicCocycle c = build_two_loop_cocycle(s);
  const SpectrumReport rep = lyapunov_spectrum(c);
  // Four dwell steps over period six.
  CHECK(rep.exponents[0] == doctest::Approx(-4.0 * std::log(2.0) / 6.0).epsilon(1e-12));
  CHECK(rep.exponents[1] == doctest::Approx(4.0 * std::log(2.0) / 6.0).epsilon(1e-12));
}

TEST_CASE("swap excursion matches the brute-force return product") {
  TwoLoopSpec s;
  s.fixed = Mat(2, 2);
  s.fixed << 0.9, 0, 0, 1.1;
  Mat sw(2, 2);
  sw << 0, 1, 1, 0;
  s.transition = {sw};
  s.n = 10;
  const PeriodicCocycle c = build_two_loop_cocycle(s);
  // Each loop sends e1 -> (0.9 * 1.1)^11 e2 and back, so the two-loop return
  // is the scalar 0.99^11.
  const SpectrumReport rep = lyapunov_spectrum(c);
  const double chi = 11.0 * std::log(0.99) / 24.0;
  CHECK(rep.exponents[0] == doctest::Approx(chi).epsilon(1e-12));
  CHECK(rep.exponents[1] == doctest::Approx(chi).epsilon(1e-12));
}

TEST_CASE("two-loop construction validates its inputs") {
  TwoLoopSpec s;
  s.fixed = Mat(2, 2);
  s.fixed << 0.5, 0, 0, 2.0;
  s.transition = {Mat(Mat::Identity(2, 2))};
  s.n = 0;
  CHECK_THROWS_AS(build_two_loop_cocycle(s), CocycleError);
  s.n = 1;
  s.transition.clear();
  CHECK_THROWS_AS(build_two_loop_cocycle(s), CocycleError);
  s.transition = {Mat(Mat::Identity(3, 3))};
  CHECK_THROWS_AS(build_two_loop_cocycle(s), CocycleError);
  s.transition = {Mat(Mat::Identity(2, 2))};
  s.fixed = rotm(0.3);  // unit-modulus fixed point
  CHECK_THROWS_AS(build_two_loop_cocycle(s), CocycleError);
}

TEST_CASE("dwell mask marks exactly the fixed-point positions") {
  const TwoLoopSpec s = saddle_spec(4);
  const PeriodicCocycle c = build_two_loop_cocycle(s);
  const std::vector<char> mask = two_loop_dwell_mask(s);
  REQUIRE(static_cast<int>(mask.size()) == c.period());
  int dwell = 0;
  for (int n = 0; n < c.period(); ++n) {
    if (mask[static_cast<size_t>(n)]) {
      ++dwell;
      CHECK((c.step(n) - s.fixed).cwiseAbs().maxCoeff() == 0.0);
    } else {
      CHECK((c.step(n) - s.transition[0]).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  CHECK(dwell == 2 * (s.n + 1));
}

TEST_CASE("axis swap flips orientation once per loop") {
  const TwoLoopSpec s = saddle_spec(18);
  const PeriodicCocycle two = build_two_loop_cocycle(s);
  CHECK(central_orientation_sign(two, 1) == 1);
  CHECK(central_orientation_sign(single_loop(s), 1) == -1);
}

TEST_CASE("orientation sign squares under loop doubling") {
  for (int n : {6, 11}) {
    const TwoLoopSpec s = saddle_spec(n);
    const int one = central_orientation_sign(single_loop(s), 1);
    const int two = central_orientation_sign(build_two_loop_cocycle(s), 1);
    CHECK(two == one * one);
  }
}

TEST_CASE("orientation needs a trackable central plane") {
  const PeriodicCocycle c = build_two_loop_cocycle(saddle_spec(5));
  CHECK_THROWS_AS(central_orientation_sign(c, 0), CocycleError);
  CHECK_THROWS_AS(central_orientation_sign(c, 3), CocycleError);
  // A pair straddling no spectral gap on either side has no tracked plane.
  std::vector<Mat> steps(8, Mat(Mat::Identity(3, 3) * 0.5));
  try {
    central_orientation_sign(PeriodicCocycle(std::move(steps)), 1);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::NoCentralPlane);
  }
}

TEST_CASE("make_complex rotates an orientation-compatible pair off the axis") {
  const TwoLoopSpec s = saddle_spec(18);
  const PeriodicCocycle two = build_two_loop_cocycle(s);
  const std::vector<char> mask = two_loop_dwell_mask(s);
  const CocyclePath p = make_complex(two, 1, 1e-3, 101, &mask);

  PathContract con;
  con.kind = PathKind::Complexify;
  con.index = 1;
  con.epsilon = 1e-3;
  const ContractVerdict v = verify_contract(p, con);
  CHECK(v.pass);
  CHECK(clause_passed(v, "endpoint_pair_complex"));
  CHECK(clause_passed(v, "endpoint_moduli_equal"));
  CHECK(clause_passed(v, "pair_sum_conserved"));
  CHECK(clause_passed(v, "bystanders_fixed"));

  const SpectrumReport end = lyapunov_spectrum(p.endpoint());
  CHECK(!end.multipliers[0].is_real());
  CHECK(!end.multipliers[1].is_real());
  CHECK(std::abs(end.multipliers[0].unit.imag()) > 1e-9);
  // Conjugate pair read off a real product: exact symmetry.
  CHECK(end.multipliers[0].log_modulus == end.multipliers[1].log_modulus);
  CHECK(end.multipliers[0].unit == std::conj(end.multipliers[1].unit));
}

TEST_CASE("make_complex honors a dwell-only step mask bitwise") {
  const TwoLoopSpec s = saddle_spec(18);
  const PeriodicCocycle two = build_two_loop_cocycle(s);
  const std::vector<char> mask = two_loop_dwell_mask(s);
  const CocyclePath p = make_complex(two, 1, 1e-3, 101, &mask);
  for (const PeriodicCocycle& sample : p.samples()) {
    for (int n = 0; n < two.period(); ++n) {
      if (!mask[static_cast<size_t>(n)])
        CHECK((sample.step(n) - two.step(n)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("make_complex on an already-complex pair is the constant path") {
  TwoLoopSpec s;
  Mat f = Mat::Zero(3, 3);
  f.topLeftCorner(2, 2) = 0.7 * rotm(0.4);
  f(2, 2) = 2.5;
  s.fixed = f;
  s.transition = {Mat(Mat::Identity(3, 3))};
  s.n = 8;
  const PeriodicCocycle two = build_two_loop_cocycle(s);
  const CocyclePath p = make_complex(two, 1, 1e-3);
  CHECK(p.radius() == 0.0);
  const SpectrumReport end = lyapunov_spectrum(p.endpoint());
  CHECK(!end.multipliers[0].is_real());
}

TEST_CASE("make_complex refuses an opposite-sign central pair") {
  const PeriodicCocycle one = single_loop(saddle_spec(18));
  try {
    make_complex(one, 1, 1e-3);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::OrientationObstruction);
  }
}

TEST_CASE("make_complex refuses a vanishing budget") {
  const PeriodicCocycle two = build_two_loop_cocycle(saddle_spec(18));
  try {
    make_complex(two, 1, 1e-13);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::InsufficientBudget);
  }
}

TEST_CASE("weak-contrast dwell growth outruns the window cap") {
  std::vector<int> minimal;
  for (int n : {10, 20}) {
    const PeriodicCocycle c = build_two_loop_cocycle(weak_contrast_spec(n));
    const DominationReport rep = domination_scan(c, 64);
    REQUIRE(rep.per_index[0].splitting_exists);
    REQUIRE(rep.per_index[0].minimal_k.has_value());
    minimal.push_back(*rep.per_index[0].minimal_k);
  }
  CHECK(minimal[0] == 24);
  CHECK(minimal[1] == 44);
  CHECK(minimal[0] <= minimal[1]);
  const PeriodicCocycle c40 = build_two_loop_cocycle(weak_contrast_spec(40));
  const DominationReport rep40 = domination_scan(c40, 64);
  CHECK(rep40.per_index[0].splitting_exists);
  CHECK(!rep40.per_index[0].minimal_k.has_value());
}

TEST_CASE("full shift scan enumerates primitive necklaces") {
  Mat d12(2, 2);
  d12 << 0.5, 0, 0, 2.0;
  SftCocycle s;
  s.allowed = {{1, 1}, {1, 1}};
  s.assignment = {d12, d12};
  const SftScanReport rep = sft_domination_scan(s, 1, 8);
  // Primitive binary necklaces of length 1..8: 2+1+2+3+6+9+18+30.
  CHECK(rep.words == 71);
  CHECK(rep.k == 1);
  CHECK(rep.max_period == 8);
  CHECK(rep.uniform);
  CHECK(rep.uniform_at_index[0]);
  CHECK(rep.failing_at_index[0] == 0);
}

TEST_CASE("a quarter-turn symbol breaks uniformity at the shortest word") {
  Mat d12(2, 2);
  d12 << 0.5, 0, 0, 2.0;
  SftCocycle s;
  s.allowed = {{1, 1}, {1, 1}};
  s.assignment = {d12, Mat(rotm(M_PI / 2.0) * d12)};
  const SftScanReport rep = sft_domination_scan(s, 1, 6);
  CHECK(!rep.uniform);
  REQUIRE(rep.worst_word.size() == 1);
  CHECK(rep.worst_word[0] == 1);
  CHECK(rep.failing_at_index[0] > 0);
  CHECK(rep.failing_at_index[0] < rep.words);
}

TEST_CASE("scan verdict on a word matches a direct check") {
  Mat d12(2, 2);
  d12 << 0.5, 0, 0, 2.0;
  SftCocycle s;
  s.allowed = {{1, 1}, {1, 1}};
  s.assignment = {d12, Mat(rotm(M_PI / 2.0) * d12)};
  const SftScanReport rep = sft_domination_scan(s, 1, 6);
  std::vector<Mat> steps;
  for (int sym : rep.worst_word)
    steps.push_back(s.assignment[static_cast<size_t>(sym)]);
  const PeriodicCocycle c(std::move(steps));
  bool ok = true;
  try {
    ok = check_k_domination(c, eigenspace_splitting(c, 1), rep.k);
  } catch (const CocycleError& e) {
    REQUIRE(e.code == Err::NoInvariantSplitting);
    ok = false;
  }
  CHECK(ok == rep.worst_dominated_at_index[0]);
  CHECK(!ok);
}

TEST_CASE("a golden-mean gate prunes the forbidden words") {
  Mat d12(2, 2);
  d12 << 0.5, 0, 0, 2.0;
  SftCocycle s;
  s.allowed = {{1, 1}, {1, 0}};  // no 11 factor
  s.assignment = {d12, d12};
  const SftScanReport gate = sft_domination_scan(s, 1, 6);
  SftCocycle full = s;
  full.allowed = {{1, 1}, {1, 1}};
  const SftScanReport open = sft_domination_scan(full, 1, 6);
  CHECK(gate.words < open.words);
  // Lucas numbers 1,3,4,7,11,18 count the gated cycles; Moebius reduction
  // to primitive necklaces gives 1,1,1,1,2,2.
  CHECK(gate.words == 8);
  CHECK(gate.uniform);
}

TEST_CASE("a transition table without cycles is an empty language") {
  Mat d12(2, 2);
  d12 << 0.5, 0, 0, 2.0;
  SftCocycle s;
  s.allowed = {{0, 1}, {0, 0}};  // 0 -> 1 only, no return
  s.assignment = {d12, d12};
  try {
    sft_domination_scan(s, 1, 5);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::EmptyLanguage);
  }
}

TEST_CASE("sft scan validates its inputs") {
  Mat d12(2, 2);
  d12 << 0.5, 0, 0, 2.0;
  SftCocycle s;
  s.allowed = {{1, 1}, {1, 1}};
  s.assignment = {d12, d12};
  CHECK_THROWS_AS(sft_domination_scan(s, 0, 5), CocycleError);
  CHECK_THROWS_AS(sft_domination_scan(s, 1, 0), CocycleError);
  CHECK_THROWS_AS(sft_domination_scan(s, 1, 21), CocycleError);
  SftCocycle ragged = s;
  ragged.allowed = {{1, 1}};
  CHECK_THROWS_AS(sft_domination_scan(ragged, 1, 5), CocycleError);
  SftCocycle shape = s;
  shape.assignment = {d12, Mat(Mat::Identity(3, 3))};
  CHECK_THROWS_AS(sft_domination_scan(shape, 1, 5), CocycleError);
}
