#include <catch2/catch_amalgamated.hpp>

#include "loglab/risk.hpp"
#include "oracles.hpp"

using namespace loglab;

namespace {
const double kLn2 = 0.69314718055994530942;
const double kPi = 3.14159265358979323846;

CovarianceModel identity_cov(int d) {
  SpectrumSpec spec;
  spec.kind = SpectrumSpec::Kind::Identity;
  return build_spectrum(spec, d);
}
}  // namespace

TEST_CASE("joint_summary canonical configurations") {
  auto cov = identity_cov(2);
  Vector w_star(2);
  w_star << 1.0, 0.0;

  auto self = joint_summary(w_star, w_star, cov);
  REQUIRE(self.s_w == Catch::Approx(1.0));
  REQUIRE(self.s_star == Catch::Approx(1.0));
  REQUIRE(self.c == Catch::Approx(1.0));
  REQUIRE(self.theta == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(self.theta_defined);

  auto anti = joint_summary(Vector(-w_star), w_star, cov);
  REQUIRE(anti.theta == Catch::Approx(kPi).epsilon(1e-12));

  Vector ortho(2);
  ortho << 0.0, 1.0;
  auto perp = joint_summary(ortho, w_star, cov);
  REQUIRE(perp.c == 0.0);
  REQUIRE(perp.theta == Catch::Approx(kPi / 2).epsilon(1e-12));

  auto degenerate = joint_summary(Vector::Zero(2), w_star, cov);
  REQUIRE_FALSE(degenerate.theta_defined);
}

TEST_CASE("population_logistic_risk anchor values") {
  auto cov = identity_cov(2);
  auto grid = gauss_hermite(96);
  Vector w_star(2);
  w_star << 1.0, 0.0;

  auto at_zero = joint_summary(Vector::Zero(2), w_star, cov);
  REQUIRE(population_logistic_risk(at_zero, grid) == Catch::Approx(kLn2).epsilon(1e-12));

  auto both_zero = joint_summary(Vector::Zero(2), Vector::Zero(2), cov);
  REQUIRE(population_logistic_risk(both_zero, grid) == Catch::Approx(kLn2).epsilon(1e-12));

  QuadratureGrid low;
  low.order = 7;
  REQUIRE_THROWS_AS(population_logistic_risk(at_zero, low), std::invalid_argument);
}

TEST_CASE("quadrature matches Monte Carlo at w = w*") {
  auto cov = identity_cov(2);
  Vector w_star(2);
  w_star << std::sqrt(0.5), std::sqrt(0.5);  // s_star = 1
  auto grid = gauss_hermite(96);
  auto s = joint_summary(w_star, w_star, cov);
  double quad = population_logistic_risk(s, grid);
  auto mc = monte_carlo_risks(w_star, w_star, cov, 10000000, 99);
  REQUIRE(std::abs(quad - mc.logistic) <= 3.0 * mc.logistic_se);
  REQUIRE(std::abs(population_zero_one_error(s, grid) - mc.zero_one) <= 3.0 * mc.zero_one_se);
}

TEST_CASE("population zero-one conventions and bounds") {
  auto cov = identity_cov(2);
  auto grid = gauss_hermite(96);
  Vector w_star(2);
  w_star << 1.0, 0.0;

  auto at_zero = joint_summary(Vector::Zero(2), w_star, cov);
  REQUIRE(population_zero_one_error(at_zero, grid) == 1.0);

  // positive multiple of w* has zero excess over Bayes
  auto aligned = joint_summary(Vector(3.0 * w_star), w_star, cov);
  double err = population_zero_one_error(aligned, grid);
  double bayes = bayes_zero_one(1.0, grid.order);
  REQUIRE(err == Catch::Approx(bayes).margin(1e-12));
  REQUIRE(bayes >= 1.0 / (std::sqrt(2.0) * kPi * 2.0));

  // degenerate w* = 0: labels are a fair coin
  auto no_signal = joint_summary(w_star, Vector::Zero(2), cov);
  REQUIRE(population_zero_one_error(no_signal, grid) == 0.5);
}

TEST_CASE("excess_zero_one_from_angle anchors") {
  auto grid = gauss_hermite(96);
  REQUIRE(excess_zero_one_from_angle(0.0, 1.0, grid) == 0.0);
  REQUIRE(excess_zero_one_from_angle(2.0, 1.0, grid) >= 1.0 / (4.0 * std::sqrt(2.0 * kPi)));
  REQUIRE(excess_zero_one_from_angle(kPi / 4, 1.0, grid) >=
          (1.0 / (48.0 * kPi)) * (1.0 - std::cos(kPi / 4)));
  // at theta = pi the classifier is flipped: excess = 1 - 2 * bayes
  double bayes = bayes_zero_one(1.0, grid.order);
  REQUIRE(excess_zero_one_from_angle(kPi, 1.0, grid) ==
          Catch::Approx(1.0 - 2.0 * bayes).margin(1e-10));
  REQUIRE_THROWS_AS(excess_zero_one_from_angle(-0.1, 1.0, grid), std::invalid_argument);
  REQUIRE_THROWS_AS(excess_zero_one_from_angle(3.5, 1.0, grid), std::invalid_argument);
  REQUIRE_THROWS_AS(excess_zero_one_from_angle(1.0, 0.0, grid), std::invalid_argument);
}

TEST_CASE("excess error is scale invariant in w") {
  auto grid = gauss_hermite(96);
  auto cov = identity_cov(3);
  Vector w_star(3);
  w_star << 0.6, -0.3, 0.5;
  Vector w(3);
  w << 1.0, 2.0, -0.5;
  auto s1 = joint_summary(w, w_star, cov);
  auto s2 = joint_summary(Vector(7.3 * w), w_star, cov);
  double e1 = excess_zero_one_from_angle(s1.theta, s1.s_star, grid);
  double e2 = excess_zero_one_from_angle(s2.theta, s2.s_star, grid);
  REQUIRE(std::abs(e1 - e2) <= 1e-12);
}

TEST_CASE("calibration_error anchors and MC agreement") {
  auto cov = identity_cov(2);
  auto grid = gauss_hermite(96);
  Vector w_star(2);
  w_star << std::sqrt(0.5), std::sqrt(0.5);

  auto self = joint_summary(w_star, w_star, cov);
  REQUIRE(calibration_error(self, grid) <= 1e-10);

  auto zeros = joint_summary(Vector::Zero(2), Vector::Zero(2), cov);
  REQUIRE(calibration_error(zeros, grid) == Catch::Approx(0.0).margin(1e-14));

  Vector w2 = 2.0 * w_star;
  auto scaled = joint_summary(w2, w_star, cov);
  double quad = calibration_error(scaled, grid);
  auto mc = monte_carlo_risks(w2, w_star, cov, 10000000, 123);
  REQUIRE(std::abs(quad - mc.calibration) <= 3.0 * mc.calibration_se);
}

TEST_CASE("bayes_risks conventions and lower bounds") {
  auto cov = identity_cov(2);
  auto grid = gauss_hermite(96);

  auto zero_param = TrueParameter::make(cov, Vector::Zero(2));
  auto [logistic0, err0] = bayes_risks(zero_param, cov, grid);
  REQUIRE(logistic0 == Catch::Approx(kLn2).epsilon(1e-12));
  REQUIRE(err0 == 1.0);

  Vector w_star(2);
  w_star << 1.0, 0.0;
  auto param = TrueParameter::make(cov, w_star);
  auto [logistic, err] = bayes_risks(param, cov, grid);
  REQUIRE(err >= 1.0 / (2.0 * std::sqrt(2.0) * kPi));
  REQUIRE(logistic >= kLn2 * err);
}

TEST_CASE("proposition chain over random pairs") {
  auto grid = gauss_hermite(64);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed, 0xc4a1);
    const int d = 4;
    auto cov = identity_cov(d);
    Vector w(d), w_star(d);
    for (int i = 0; i < d; ++i) {
      w[i] = rng.next_gaussian();
      w_star[i] = rng.next_gaussian();
    }
    w_star *= (0.2 + 2.0 * rng.next_uniform()) / w_star.norm();
    auto s = joint_summary(w, w_star, cov);
    auto s_star = joint_summary(w_star, w_star, cov);

    double excess_err = population_zero_one_error(s, grid) - bayes_zero_one(s.s_star, grid.order);
    double cal = calibration_error(s, grid);
    double excess_risk =
        population_logistic_risk(s, grid) - population_logistic_risk(s_star, grid);
    REQUIRE(excess_err <= 2.0 * std::sqrt(cal) + 1e-8);
    REQUIRE(2.0 * cal <= excess_risk + 1e-8);
    REQUIRE(population_logistic_risk(s, grid) >= kLn2 * population_zero_one_error(s, grid) - 1e-10);
  }
}

TEST_CASE("monte_carlo_risks basics") {
  auto cov = identity_cov(2);
  Vector w_star(2);
  w_star << 1.0, 0.0;
  auto a = monte_carlo_risks(Vector::Zero(2), w_star, cov, 100000, 5);
  REQUIRE(std::abs(a.logistic - kLn2) <= 3.0 * a.logistic_se + 1e-12);
  auto b = monte_carlo_risks(Vector::Zero(2), w_star, cov, 100000, 5);
  REQUIRE(a.logistic == b.logistic);
  REQUIRE(a.zero_one == b.zero_one);
  REQUIRE_THROWS_AS(monte_carlo_risks(w_star, w_star, cov, 999, 1), std::invalid_argument);
}
