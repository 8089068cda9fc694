#ifndef LOGLAB_RISK_HPP
#define LOGLAB_RISK_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "loglab/dataset.hpp"
#include "loglab/quadrature.hpp"
#include "loglab/rng.hpp"
#include "loglab/spectrum.hpp"

namespace loglab {

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

// ln(1 + e^{-t}), stable for large |t|
inline double logistic_loss(double t) {
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

// Under the Gaussian design the pair (x'w, x'w*) is bivariate Gaussian, so
// every population functional reduces to a 2D integral over this summary.
struct JointSummary {
  double s_w = 0.0;     // ||w||_Sigma
  double s_star = 0.0;  // ||w*||_Sigma
  double c = 0.0;       // w' Sigma w*
  double theta = 0.0;   // angle between Sigma^{1/2} w and Sigma^{1/2} w*
  bool theta_defined = false;
};

inline JointSummary joint_summary(const Vector& w, const Vector& w_star,
                                  const CovarianceModel& cov) {
  JointSummary s;
  s.s_w = sigma_norm(w, cov);
  s.s_star = sigma_norm(w_star, cov);
  s.c = sigma_dot(w, w_star, cov);
  if (s.s_w > 0.0 && s.s_star > 0.0) {
    double cosang = s.c / (s.s_w * s.s_star);
    cosang = std::min(1.0, std::max(-1.0, cosang));
    s.theta = std::acos(cosang);
    s.theta_defined = true;
  }
  return s;
}

struct RiskTriple {
  double logistic = 0.0;
  double zero_one = 0.0;
  double calibration = 0.0;
  // standard errors, filled by the Monte Carlo estimator only
  double logistic_se = 0.0;
  double zero_one_se = 0.0;
  double calibration_se = 0.0;
};

namespace detail {
// Whitening of (a, b) = (x'w, x'w*): b = s_star g2, a = cb g2 + sa g1.
struct Whitened {
  double cb = 0.0;
  double sa = 0.0;
};
inline Whitened whiten(const JointSummary& s) {
  Whitened wh;
  wh.cb = (s.s_star > 0.0) ? s.c / s.s_star : 0.0;
  wh.sa = std::sqrt(std::max(0.0, s.s_w * s.s_w - wh.cb * wh.cb));
  return wh;
}
}  // namespace detail

// E[sigma(b) l(a) + sigma(-b) l(-a)] by tensorized Gauss-Hermite.
inline double population_logistic_risk(const JointSummary& s, const QuadratureGrid& grid) {
  if (grid.order < 8) throw std::invalid_argument("population_logistic_risk: order < 8");
  auto wh = detail::whiten(s);
  double total = 0.0;
  for (int i = 0; i < grid.order; ++i) {
    const double g2 = grid.nodes[i];
    const double b = s.s_star * g2;
    const double pb = sigmoid(b);
    double inner = 0.0;
    for (int j = 0; j < grid.order; ++j) {
      const double a = wh.cb * g2 + wh.sa * grid.nodes[j];
      inner += grid.weights[j] * (pb * logistic_loss(a) + (1.0 - pb) * logistic_loss(-a));
    }
    total += grid.weights[i] * inner;
  }
  return total;
}

// Bayes zero-one error: 2 E[sigma(-s* g) 1{g >= 0}]; the w* = 0 convention
// (ties counted as errors) gives 1.
inline double bayes_zero_one(double s_star, int order) {
  if (s_star <= 0.0) return 1.0;
  auto gl = gauss_legendre(order, 0.0, 13.0);
  double total = 0.0;
  const double inv_sqrt_2pi = 0.39894228040143267793994605993438;
  for (int i = 0; i < gl.order; ++i) {
    double g = gl.nodes[i];
    total += gl.weights[i] * sigmoid(-s_star * g) * inv_sqrt_2pi * std::exp(-0.5 * g * g);
  }
  return 2.0 * total;
}

// Excess zero-one error as a function of (theta, s_star) only; the indicator
// region is handled in polar coordinates so the integrand is smooth:
//   excess = (1/pi) int_0^theta int_0^inf (2 sigma(s* r sin u) - 1)
//            r exp(-r^2/2) dr du.
inline double excess_zero_one_from_angle(double theta, double s_star,
                                         const QuadratureGrid& grid) {
  if (theta < 0.0 || theta > 3.14159265358979323846 + 1e-12)
    throw std::invalid_argument("excess_zero_one_from_angle: theta outside [0, pi]");
  if (s_star <= 0.0) throw std::invalid_argument("excess_zero_one_from_angle: s_star must be positive");
  if (theta == 0.0) return 0.0;
  auto gl_u = gauss_legendre(grid.order, 0.0, theta);
  auto gl_r = gauss_legendre(grid.order, 0.0, 13.0);
  double total = 0.0;
  for (int i = 0; i < gl_u.order; ++i) {
    const double sinu = std::sin(gl_u.nodes[i]);
    double inner = 0.0;
    for (int j = 0; j < gl_r.order; ++j) {
      const double r = gl_r.nodes[j];
      inner += gl_r.weights[j] * (2.0 * sigmoid(s_star * r * sinu) - 1.0) * r *
               std::exp(-0.5 * r * r);
    }
    total += gl_u.weights[i] * inner;
  }
  return total / 3.14159265358979323846;
}

// Pr(y x'w <= 0). Degenerate conventions: s_w = 0 gives 1; w* = 0 makes the
// label a fair coin, so any non-degenerate w has error 1/2.
inline double population_zero_one_error(const JointSummary& s, const QuadratureGrid& grid) {
  if (s.s_w <= 0.0) return 1.0;
  if (s.s_star <= 0.0) return 0.5;
  return bayes_zero_one(s.s_star, grid.order) +
         excess_zero_one_from_angle(s.theta, s.s_star, grid);
}

// Cal(w) = E (sigma(a) - sigma(b))^2
inline double calibration_error(const JointSummary& s, const QuadratureGrid& grid) {
  auto wh = detail::whiten(s);
  double total = 0.0;
  for (int i = 0; i < grid.order; ++i) {
    const double g2 = grid.nodes[i];
    const double pb = sigmoid(s.s_star * g2);
    double inner = 0.0;
    for (int j = 0; j < grid.order; ++j) {
      const double a = wh.cb * g2 + wh.sa * grid.nodes[j];
      const double diff = sigmoid(a) - pb;
      inner += grid.weights[j] * diff * diff;
    }
    total += grid.weights[i] * inner;
  }
  return total;
}

inline RiskTriple quadrature_risks(const JointSummary& s, const QuadratureGrid& grid) {
  RiskTriple r;
  r.logistic = population_logistic_risk(s, grid);
  r.zero_one = population_zero_one_error(s, grid);
  r.calibration = calibration_error(s, grid);
  return r;
}

inline std::pair<double, double> bayes_risks(const TrueParameter& param,
                                             const CovarianceModel& cov,
                                             const QuadratureGrid& grid) {
  JointSummary s = joint_summary(param.coeffs, param.coeffs, cov);
  return {population_logistic_risk(s, grid), bayes_zero_one(s.s_star, grid.order)};
}

// Independent oracle: fresh Gaussian draws, unbiased estimates with standard
// errors. Per-sample streams are counter-based, so results do not depend on
// evaluation order.
inline RiskTriple monte_carlo_risks(const Vector& w, const Vector& w_star,
                                    const CovarianceModel& cov, std::int64_t N,
                                    std::uint64_t seed) {
  if (N < 1000) throw std::invalid_argument("monte_carlo_risks: N must be at least 10^3");
  const int d = cov.dim;
  Vector sd(d);
  for (int j = 0; j < d; ++j) sd[j] = std::sqrt(cov.eigenvalues[j]);

  double sum_l = 0.0, sum_l2 = 0.0;
  double sum_e = 0.0, sum_e2 = 0.0;
  double sum_c = 0.0, sum_c2 = 0.0;
  for (std::int64_t i = 0; i < N; ++i) {
    CounterRng rng(seed, std::uint64_t(i) + 0x4d6f6e7465ULL);
    double a = 0.0, b = 0.0;
    for (int j = 0; j < d; ++j) {
      double x = sd[j] * rng.next_gaussian();
      a += x * w[j];
      b += x * w_star[j];
    }
    double y = (rng.next_uniform() < sigmoid(b)) ? 1.0 : -1.0;
    double l = logistic_loss(y * a);
    double e = (y * a <= 0.0) ? 1.0 : 0.0;
    double diff = sigmoid(a) - sigmoid(b);
    double cal = diff * diff;
    sum_l += l;
    sum_l2 += l * l;
    sum_e += e;
    sum_e2 += e * e;
    sum_c += cal;
    sum_c2 += cal * cal;
  }
  const double n = double(N);
  auto finish = [n](double s1, double s2, double& mean, double& se) {
    mean = s1 / n;
    double var = std::max(0.0, s2 / n - mean * mean);
    se = std::sqrt(var / n);
  };
  RiskTriple r;
  finish(sum_l, sum_l2, r.logistic, r.logistic_se);
  finish(sum_e, sum_e2, r.zero_one, r.zero_one_se);
  finish(sum_c, sum_c2, r.calibration, r.calibration_se);
  return r;
}

}  // namespace loglab

#endif  // LOGLAB_RISK_HPP
