#include "duhamel/levy.hpp"

#include <cmath>

#include "doctest.h"
#include "duhamel/quadrature.hpp"
#include "oracles.hpp"

using namespace duhamel;

namespace {
const double kE = std::exp(1.0);

LevyMeasure headline_measure() { return LevyMeasure::tempered(1.0, 2.0, 1.0); }
}  // namespace

TEST_CASE("second moment near the origin") {
  CHECK(second_moment_near(LevyMeasure::atomic({{0.5, 2.0}}), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(second_moment_near(LevyMeasure::atomic({{2.0, 1.0}}), 1.0) == 0.0);

  // stable: closed form 2 c r^{2-a}/(2-a), cross-checked by the Simpson oracle
  const LevyMeasure st = LevyMeasure::stable(0.5, 1.0);
  CHECK(second_moment_near(st, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  const double orc = 2.0 * oracle::integrate_singular_left(
                               [](double z) { return std::pow(z, 0.5); }, 0.0, 1.0);
  CHECK(second_moment_near(st, 1.0) == doctest::Approx(orc).epsilon(1e-10));

  const double orc_t = 2.0 * oracle::integrate([](double z) { return std::exp(-2.0 * z); }, 0.0, 1.0);
  CHECK(second_moment_near(headline_measure(), 1.0) == doctest::Approx(orc_t).epsilon(1e-10));
  CHECK(second_moment_near(headline_measure(), 1.0) ==
        doctest::Approx(0.864664716763387308).epsilon(1e-10));

  // singular end of the family
  const LevyMeasure st19 = LevyMeasure::stable(1.9, 0.7);
  CHECK(second_moment_near(st19, 0.3) ==
        doctest::Approx(2.0 * 0.7 * std::pow(0.3, 0.1) / 0.1).epsilon(1e-12));
  const LevyMeasure tm19 = LevyMeasure::tempered(1.9, 1.0, 1.0);
  const double orc19 = 2.0 * oracle::integrate_singular_left(
                                 [](double z) { return std::pow(z, -0.9) * std::exp(-z); }, 0.0, 0.5);
  CHECK(second_moment_near(tm19, 0.5) == doctest::Approx(orc19).epsilon(1e-9));
}

TEST_CASE("tail mass") {
  CHECK(tail_mass(LevyMeasure::atomic({{0.5, 2.0}, {2.0, 1.0}}), 1.0) == 1.0);
  CHECK(tail_mass(LevyMeasure::stable(1.0, 1.0), 1.0) == doctest::Approx(2.0).epsilon(1e-13));
  const double orc = 2.0 * oracle::integrate(
                               [](double z) { return std::exp(-z) / (z * z); }, 1.0, 60.0);
  CHECK(tail_mass(LevyMeasure::tempered(1.0, 1.0, 1.0), 1.0) == doctest::Approx(orc).epsilon(1e-10));
  CHECK(tail_mass(LevyMeasure::tempered(1.0, 1.0, 1.0), 1.0) ==
        doctest::Approx(0.296991013551844096).epsilon(1e-10));
}

TEST_CASE("drift correction") {
  CHECK(drift_correction(LevyMeasure::stable(0.7, 2.0), 1.0) == 0.0);
  CHECK(drift_correction(LevyMeasure::stable(0.7, 2.0), 0.5) == 0.0);
  CHECK(drift_correction(headline_measure(), 0.25) == 0.0);
  CHECK(drift_correction(LevyMeasure::atomic({{0.8, 1.0}}), 0.5) == doctest::Approx(-0.8).epsilon(1e-15));
  CHECK(drift_correction(LevyMeasure::atomic({{0.8, 1.0}}), 1.0) == 0.0);
  // symmetric atomic: exact cancellation
  CHECK(drift_correction(LevyMeasure::atomic({{0.8, 1.0}, {-0.8, 1.0}}), 0.5) == 0.0);
}

TEST_CASE("exponential moment and temperedness") {
  CHECK(exponential_moment(LevyMeasure::stable(1.0, 1.0), 0.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS((void)exponential_moment(LevyMeasure::stable(1.0, 1.0), 0.1), Error);
  CHECK_FALSE(is_tempered(LevyMeasure::stable(1.0, 1.0), 0.1));

  // tempered alpha=1 lambda=2 at M=1: integrand e^z e^{-2z} z^{-2}
  const double orc = 2.0 * oracle::integrate(
                               [](double z) { return std::exp(-z) / (z * z); }, 1.0, 60.0);
  CHECK(exponential_moment(headline_measure(), 1.0) == doctest::Approx(orc).epsilon(1e-10));
  CHECK(is_tempered(headline_measure(), 2.0));
  CHECK_FALSE(is_tempered(headline_measure(), 2.0 + 1e-9));

  // atomic moments are plain sums
  const LevyMeasure at = LevyMeasure::atomic({{1.5, 1.0}, {-1.5, 1.0}});
  CHECK(exponential_moment(at, 1.0) == doctest::Approx(2.0 * std::exp(1.5)).epsilon(1e-14));
}

TEST_CASE("consistency: exponential_moment at rate 0 equals tail mass at 1") {
  const LevyMeasure ms[] = {LevyMeasure::stable(0.5, 1.3), headline_measure(),
                            LevyMeasure::atomic({{0.5, 2.0}, {2.0, 1.0}}),
                            LevyMeasure::tabulated({-2.0, -1.5, 0.5, 1.5, 2.5},
                                                   {0.3, 0.2, 0.4, 0.2, 0.1}, 1.0)};
  for (const LevyMeasure& mu : ms)
    CHECK(exponential_moment(mu, 0.0) == doctest::Approx(tail_mass(mu, 1.0)).epsilon(1e-10));
}

TEST_CASE("moment monotonicity in the radius") {
  const LevyMeasure ms[] = {LevyMeasure::stable(1.2, 0.8), headline_measure(),
                            LevyMeasure::atomic({{0.3, 1.0}, {-0.7, 2.0}, {1.4, 0.5}}),
                            LevyMeasure::tabulated({-2.0, -0.5, 0.25, 1.0, 3.0},
                                                   {0.1, 0.5, 0.5, 0.3, 0.05}, 2.0)};
  for (const LevyMeasure& mu : ms) {
    double prev_s = 0.0;
    double prev_t = tail_mass(mu, 0.05);
    for (double r : {0.1, 0.5, 1.0}) {
      const double s = second_moment_near(mu, r);
      const double t = tail_mass(mu, r);
      CHECK(s >= prev_s - 1e-14);
      CHECK(t <= prev_t + 1e-14);
      prev_s = s;
      prev_t = t;
    }
  }
}

TEST_CASE("adjoint reflection of atomic measures") {
  const LevyMeasure mu = LevyMeasure::atomic({{0.4, 1.0}, {-0.9, 2.0}, {1.7, 0.5}});
  const LevyMeasure mr = mu.reflected();
  for (double r : {0.2, 0.6, 1.3}) {
    CHECK(second_moment_near(mr, r) == doctest::Approx(second_moment_near(mu, r)).epsilon(1e-15));
    CHECK(tail_mass(mr, r) == doctest::Approx(tail_mass(mu, r)).epsilon(1e-15));
  }
  CHECK(drift_correction(mr, 0.3) == doctest::Approx(-drift_correction(mu, 0.3)).epsilon(1e-15));
  CHECK_FALSE(mu.symmetric());
  CHECK(LevyMeasure::atomic({{0.4, 1.0}, {-0.4, 1.0}}).symmetric());
}

TEST_CASE("interval mass and first moment") {
  const LevyMeasure at = LevyMeasure::atomic({{0.5, 2.0}, {-0.75, 1.0}, {2.0, 3.0}});
  CHECK(at.mass(0.25, 1.0) == 2.0);
  CHECK(at.mass(-1.0, -0.5) == 1.0);
  CHECK(at.first_moment(-1.0, -0.5) == doctest::Approx(-0.75).epsilon(1e-15));

  // continuous check against the oracle on a cell away from zero
  const LevyMeasure tm = headline_measure();
  const double orc = oracle::integrate(
      [](double z) { return std::exp(-2.0 * z) / (z * z); }, 0.3, 0.45);
  CHECK(tm.mass(0.3, 0.45) == doctest::Approx(orc).epsilon(1e-10));
  const double orc_neg = -oracle::integrate(
      [](double z) { return std::exp(-2.0 * z) / z; }, 0.3, 0.45);
  CHECK(tm.first_moment(-0.45, -0.3) == doctest::Approx(orc_neg).epsilon(1e-10));
}

TEST_CASE("tabulated density integrates trapezoid plus declared tail") {
  // symmetric hat density on [-1,1] plus e^{-2(|z|-1)} tails from rho=0.2
  const LevyMeasure tb =
      LevyMeasure::tabulated({-1.0, -0.1, 0.1, 1.0}, {0.2, 1.0, 1.0, 0.2}, 2.0);
  CHECK(tb.symmetric());
  // right tail mass beyond 1: 0.2 / 2, both sides
  CHECK(tail_mass(tb, 1.0) == doctest::Approx(2.0 * 0.2 / 2.0).epsilon(1e-12));
  // trapezoid on the clipped segment [0.5, 1]: density linear 1 -> 0.2 on [0.1, 1]
  const double rho_half = 1.0 + (0.5 - 0.1) / 0.9 * (0.2 - 1.0);
  const double seg = 0.5 * 0.5 * (rho_half + 0.2);
  CHECK(tb.mass(0.5, 1.0) == doctest::Approx(seg).epsilon(1e-12));
  // exponential moment finite only below the decay rate
  CHECK(is_tempered(tb, 1.5));
  CHECK_FALSE(is_tempered(tb, 2.0));
  // compact (decay 0) variant has no tail at all
  const LevyMeasure tc =
      LevyMeasure::tabulated({-1.0, -0.1, 0.1, 1.0}, {0.2, 1.0, 1.0, 0.2}, 0.0);
  CHECK(tail_mass(tc, 1.0) == 0.0);
  CHECK(is_tempered(tc, 100.0));
}

TEST_CASE("supersolution constants") {
  SUBCASE("local operator") {
    const SupersolutionConstants c =
        supersolution_constants(OperatorKind::laplacian(), 0.0, 1.0, 1.0);
    CHECK(c.k == 1.0);
    CHECK(c.K == 1.0);
    CHECK(c.C == doctest::Approx(kE).epsilon(1e-15));
    CHECK(c.K >= c.C_k);
  }
  SUBCASE("atomic pair outside the unit ball") {
    const OperatorKind op =
        OperatorKind::nonlocal(LevyMeasure::atomic({{1.5, 1.0}, {-1.5, 1.0}}), true);
    const SupersolutionConstants c = supersolution_constants(op, 1.0, 1.0, 0.5);
    CHECK(c.C_k == doctest::Approx(2.0 * std::exp(1.5)).epsilon(1e-13));
    CHECK(c.k == 1.0);
    CHECK(c.K == c.C_k);
  }
  SUBCASE("tempered headline measure, oracle cross-check") {
    const OperatorKind op = OperatorKind::nonlocal(headline_measure(), true);
    const SupersolutionConstants c = supersolution_constants(op, 1.0, 1.0, 0.5);
    const double smn = 2.0 * oracle::integrate([](double z) { return std::exp(-2.0 * z); }, 0.0, 1.0);
    const double em = 2.0 * oracle::integrate(
                                [](double z) { return std::exp(-z) / (z * z); }, 1.0, 60.0);
    const double ck = 0.5 * kE * smn + em;
    CHECK(c.C_k == doctest::Approx(ck).epsilon(1e-9));
    CHECK(c.C_k == doctest::Approx(1.47219220719564555).epsilon(1e-10));
    CHECK(c.C == doctest::Approx(std::exp(0.5)).epsilon(1e-13));
  }
  SUBCASE("stable measures are rejected") {
    const OperatorKind op = OperatorKind::nonlocal(LevyMeasure::stable(1.0, 1.0), true);
    CHECK_THROWS_AS((void)supersolution_constants(op, 1.0, 1.0, 0.5), Error);
  }
}

TEST_CASE("fractional laplacian normalization") {
  // alpha = 1 must give the Cauchy-generator constant 1/pi
  const LevyMeasure mu = LevyMeasure::stable_fractional(1.0);
  const auto& s = std::get<StableSpec>(mu.spec());
  CHECK(s.c == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
}

TEST_CASE("library quadrature agrees with the Simpson oracle on a rough integrand") {
  const double a = integrate([](double z) { return std::pow(z, -0.5) * std::cos(z); }, 0.0, 2.0,
                             1e-12);
  const double b = oracle::integrate_singular_left(
      [](double z) { return std::pow(z, -0.5) * std::cos(z); }, 0.0, 2.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
}
