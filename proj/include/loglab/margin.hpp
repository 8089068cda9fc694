#ifndef LOGLAB_MARGIN_HPP
#define LOGLAB_MARGIN_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/gd.hpp"

namespace loglab {

struct DualSolution {
  Vector beta;          // dual variables pre-multiplied by labels
  Vector w_primal;      // X' beta, satisfies y_i x_i' w >= 1 with equality on S+
  double gamma = 0.0;   // maximum l2 margin
  Vector w_tilde;       // unit max-margin direction
  std::vector<int> support_set;
  double kkt_residual = 0.0;
  int sweeps = 0;
};

struct SeparabilityReport {
  bool separable = false;
  Vector certificate;       // separating unit vector when separable
  Vector witness_weights;   // convex weights mu with sum mu_i y_i x_i ~ 0 otherwise
  double min_margin = 0.0;  // min_i y_i x_i' certificate
  std::string route;        // "ols" or "dual"
};

inline double min_margin(const Vector& w, const Dataset& data) {
  Vector margins = data.features * w;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < data.n(); ++i) m = std::min(m, data.labels[i] * margins[i]);
  return m;
}

// (min_i y_i x_i' w, strict positivity flag)
inline std::pair<bool, double> interpolation_check(const Vector& w, const Dataset& data) {
  if (w.size() != data.dim()) throw std::invalid_argument("interpolation_check: dimension mismatch");
  double m = min_margin(w, data);
  return {m > 0.0, m};
}

// Hard-margin dual by cyclic coordinate ascent with exact clipped-quadratic
// coordinate updates:
//   max -1/2 beta' X X' beta + beta' y   s.t.  y_i beta_i >= 0.
// In alpha_i := y_i beta_i >= 0 this is the standard SVM dual. Inseparable
// data makes the dual unbounded, detected by norm blow-up. All iteration
// state lives in the label-folded Gram matrix K_ij = y_i y_j x_i'x_j, so a
// sweep costs O(n^2) independent of the ambient dimension; margins m = K
// alpha are maintained incrementally and refreshed periodically to cap
// accumulated rounding drift.
inline DualSolution solve_max_margin_dual(const Dataset& data, double tol = 1e-8,
                                          std::int64_t max_sweeps = 2000000,
                                          std::uint64_t init_seed = 0) {
  const int n = data.n();
  Matrix z(n, data.dim());
  for (int i = 0; i < n; ++i) z.row(i) = double(data.labels[i]) * data.features.row(i);
  Matrix k = z * z.transpose();
  for (int i = 0; i < n; ++i)
    if (k(i, i) <= 0.0) throw std::invalid_argument("solve_max_margin_dual: zero feature row");

  Vector alpha = Vector::Zero(n);
  if (init_seed != 0) {
    CounterRng rng(init_seed, 0xd5a1);
    for (int i = 0; i < n; ++i) alpha[i] = rng.next_uniform();
  }
  Vector margins = k * alpha;

  const double unbounded_cap = 1e10;
  DualSolution sol;
  for (std::int64_t sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      double alpha_new = std::max(0.0, alpha[i] + (1.0 - margins[i]) / k(i, i));
      double applied = alpha_new - alpha[i];
      if (applied != 0.0) {
        alpha[i] = alpha_new;
        margins += applied * k.col(i);
      }
    }
    if ((sweep & 1023) == 1023) margins = k * alpha;
    // measure optimality against the final alpha, not the stale mid-sweep
    // margins: alpha_i > 0 needs y_i x_i'w = 1, alpha_i = 0 needs y_i x_i'w >= 1
    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
      double viol =
          alpha[i] > 0.0 ? std::abs(1.0 - margins[i]) : std::max(0.0, 1.0 - margins[i]);
      residual = std::max(residual, viol);
    }
    sol.sweeps = int(sweep + 1);
    sol.kkt_residual = residual;
    if (residual <= tol) break;
    if (alpha.norm() > unbounded_cap)
      throw std::runtime_error("solve_max_margin_dual: dual unbounded, data not separable");
  }
  if (sol.kkt_residual > tol)
    throw std::runtime_error("solve_max_margin_dual: no convergence, residual " +
                             std::to_string(sol.kkt_residual));

  Vector w = z.transpose() * alpha;
  sol.beta.resize(n);
  for (int i = 0; i < n; ++i) sol.beta[i] = data.labels[i] * alpha[i];
  sol.w_primal = w;
  double wn = w.norm();
  if (wn <= 0.0) throw std::runtime_error("solve_max_margin_dual: degenerate primal");
  sol.w_tilde = w / wn;
  sol.gamma = min_margin(sol.w_tilde, data);
  double alpha_max = alpha.maxCoeff();
  for (int i = 0; i < n; ++i)
    if (alpha[i] > 1e-6 * alpha_max) sol.support_set.push_back(i);
  return sol;
}

// Separating certificate via OLS when rank(X) >= n: w = X'(XX')^{-1} y
// interpolates the labels exactly, hence separates. Otherwise falls back to
// the dual route; an inseparability witness is a convex combination of
// y_i x_i near zero, found by Frank-Wolfe on the simplex min-norm problem.
inline SeparabilityReport check_separability(const Dataset& data, double cond_tol = 1e-10) {
  if (data.n() == 0) throw std::invalid_argument("check_separability: empty dataset");
  const int n = data.n();
  SeparabilityReport report;

  if (n <= data.dim()) {
    Matrix gram = data.features * data.features.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (hi > 0.0 && lo > cond_tol * hi) {
      Vector y(n);
      for (int i = 0; i < n; ++i) y[i] = data.labels[i];
      Vector w = data.features.transpose() * gram.llt().solve(y);
      double m = min_margin(w / w.norm(), data);
      if (m > 0.0) {
        report.separable = true;
        report.certificate = w / w.norm();
        report.min_margin = m;
        report.route = "ols";
        return report;
      }
    }
  }

  // dual route: either the QP converges (separable) or diverges; resolve by
  // checking whether 0 is in the convex hull of {y_i x_i}
  report.route = "dual";
  try {
    DualSolution sol = solve_max_margin_dual(data, 1e-8, 200000);
    if (sol.gamma > 0.0) {
      report.separable = true;
      report.certificate = sol.w_tilde;
      report.min_margin = sol.gamma;
      return report;
    }
  } catch (const std::runtime_error&) {
    // fall through to the witness search
  }
  Matrix z(n, data.dim());
  for (int i = 0; i < n; ++i) z.row(i) = double(data.labels[i]) * data.features.row(i);
  Vector mu = Vector::Constant(n, 1.0 / n);
  Vector p = z.transpose() * mu;
  for (int it = 0; it < 200000 && p.norm() > 1e-10; ++it) {
    Vector scores = z * p;
    int j;
    scores.minCoeff(&j);
    Vector dir = z.row(j).transpose() - p;
    double denom = dir.squaredNorm();
    if (denom <= 0.0) break;
    double step = std::min(1.0, std::max(0.0, -p.dot(dir) / denom));
    if (step <= 0.0) break;
    mu *= (1.0 - step);
    mu[j] += step;
    p = z.transpose() * mu;
  }
  report.separable = false;
  report.witness_weights = mu;
  report.min_margin = 0.0;
  return report;
}

// Assumption check: numerical rank of the support rows equals that of all rows.
inline bool support_rank_condition(const Dataset& data, const DualSolution& dual,
                                   double rank_tol = 1e-8) {
  if (dual.support_set.empty())
    throw std::invalid_argument("support_rank_condition: empty support set");
  auto numerical_rank = [rank_tol](const Matrix& rows) {
    Eigen::BDCSVD<Matrix> svd(rows);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > rank_tol * sv[0]) ++rank;
    return rank;
  };
  Matrix support_rows(int(dual.support_set.size()), data.dim());
  for (size_t i = 0; i < dual.support_set.size(); ++i)
    support_rows.row(int(i)) = data.features.row(dual.support_set[i]);
  return numerical_rank(support_rows) == numerical_rank(data.features);
}

// || w_t/||w_t|| - w_tilde || over recorded iterates with t > 0
inline std::vector<std::pair<std::int64_t, double>> directional_gap(const GDTrace& trace,
                                                                    const Vector& w_tilde) {
  std::vector<std::pair<std::int64_t, double>> series;
  for (const auto& rec : trace.records) {
    if (rec.t == 0 || rec.w_norm <= 0.0) continue;
    series.emplace_back(rec.t, (rec.w / rec.w_norm - w_tilde).norm());
  }
  return series;
}

}  // namespace loglab

#endif  // LOGLAB_MARGIN_HPP
