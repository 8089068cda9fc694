#ifndef LOGLAB_REGPATH_HPP
#define LOGLAB_REGPATH_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/gd.hpp"

namespace loglab {

struct RegPoint {
  double lambda = 0.0;
  Vector u;
  double kkt_residual = 0.0;
  int newton_iters = 0;
};

// Damped Newton with Armijo backtracking on the lambda-strongly convex
// objective L(u) + lambda/2 ||u||^2. The Hessian is assembled explicitly for
// moderate d; above that, Newton directions come from matrix-free CG.
inline RegPoint solve_l2_erm(const Dataset& data, double lambda, double tol,
                             const Vector* warm_start = nullptr,
                             Loss loss = Loss::Logistic, int max_newton = 200) {
  if (lambda <= 0.0) throw std::invalid_argument("solve_l2_erm: lambda must be positive");
  if (tol <= 0.0) throw std::invalid_argument("solve_l2_erm: tol must be positive");
  const int d = data.dim();
  const int n = data.n();
  Vector u = warm_start ? *warm_start : Vector::Zero(d);

  auto objective = [&](const Vector& v) {
    return empirical_risk(v, data, loss) + 0.5 * lambda * v.squaredNorm();
  };

  RegPoint point;
  point.lambda = lambda;
  double obj = objective(u);
  for (int iter = 0; iter < max_newton; ++iter) {
    Vector margins = data.features * u;
    Vector coeff(n), curv(n);
    for (int i = 0; i < n; ++i) {
      double m = data.labels[i] * margins[i];
      coeff[i] = detail::loss_deriv(loss, m) * data.labels[i];
      double p = (loss == Loss::Logistic) ? sigmoid(m) * sigmoid(-m) : std::exp(-m);
      curv[i] = p;
    }
    Vector grad = (data.features.transpose() * coeff) / n + lambda * u;
    point.kkt_residual = grad.norm();
    point.newton_iters = iter;
    if (point.kkt_residual <= tol) break;

    Vector step;
    if (d <= 4000) {
      Matrix hess = Matrix::Zero(d, d);
      hess.selfadjointView<Eigen::Lower>().rankUpdate(
          (data.features.transpose() * curv.cwiseSqrt().asDiagonal()), 1.0 / n);
      hess.diagonal().array() += lambda;
      step = hess.selfadjointView<Eigen::Lower>().llt().solve(grad);
    } else {
      // conjugate gradient on (X' D X / n + lambda I) p = grad
      auto apply = [&](const Vector& v) -> Vector {
        Vector xv = data.features * v;
        return (data.features.transpose() * curv.cwiseProduct(xv)) / n + lambda * v;
      };
      Vector p = Vector::Zero(d), r = grad, dir = r;
      double rs = r.squaredNorm();
      const double target = std::max(1e-28, 1e-8 * rs);
      for (int cg = 0; cg < 2 * d && rs > target; ++cg) {
        Vector ad = apply(dir);
        double alpha = rs / dir.dot(ad);
        p += alpha * dir;
        r -= alpha * ad;
        double rs_new = r.squaredNorm();
        dir = r + (rs_new / rs) * dir;
        rs = rs_new;
      }
      step = p;
    }

    double slope = grad.dot(step);
    double stepsize = 1.0;
    // near the optimum the sufficient-decrease margin falls below rounding in
    // the objective; the extra eps-scale slack keeps Newton from stalling there
    const double round_slack = 1e-15 * std::max(1.0, std::abs(obj));
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      double obj_new = objective(u - stepsize * step);
      if (obj_new <= obj - 1e-4 * stepsize * slope + round_slack) {
        u -= stepsize * step;
        obj = obj_new;
        accepted = true;
        break;
      }
      stepsize *= 0.5;
    }
    if (!accepted) break;  // no representable progress left
  }
  if (point.kkt_residual > tol) {
    Vector grad = empirical_gradient(u, data, loss) + lambda * u;
    point.kkt_residual = grad.norm();
    if (point.kkt_residual > tol) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6e", point.kkt_residual);
      throw std::runtime_error(std::string("solve_l2_erm: Newton did not reach tolerance, ") +
                               "last residual " + buf);
    }
  }
  point.u = u;
  return point;
}

// Warm-started cascade from the largest lambda down.
inline std::vector<RegPoint> build_reg_path(const Dataset& data,
                                            const std::vector<double>& lambda_grid,
                                            double tol, Loss loss = Loss::Logistic) {
  for (size_t i = 0; i + 1 < lambda_grid.size(); ++i)
    if (lambda_grid[i] <= lambda_grid[i + 1])
      throw std::invalid_argument("build_reg_path: grid must be positive and sorted decreasing");
  if (!lambda_grid.empty() && lambda_grid.back() <= 0.0)
    throw std::invalid_argument("build_reg_path: grid must be positive");
  std::vector<RegPoint> path;
  path.reserve(lambda_grid.size());
  const Vector* warm = nullptr;
  for (double lambda : lambda_grid) {
    path.push_back(solve_l2_erm(data, lambda, tol, warm, loss));
    warm = &path.back().u;
  }
  return path;
}

inline std::vector<double> geometric_lambda_grid(double lo = 1e-8, double hi = 1e3,
                                                 double ratio = 1.1) {
  std::vector<double> grid;
  for (double v = hi; v >= lo / ratio; v /= ratio) grid.push_back(v);
  return grid;
}

enum class PairingMode { LambdaOfT, MatchedNorm };

struct PathPair {
  std::int64_t t = 0;
  double eta_t = 0.0;
  double lambda = 0.0;
  double distance = 0.0;
  double cosine = 0.0;
  double norm_ratio = 0.0;  // ||w_t|| / ||u_lambda||
  bool valid = true;
  std::string diagnostic;
};

struct PathComparison {
  PairingMode mode = PairingMode::LambdaOfT;
  std::vector<PathPair> pairs;
};

namespace detail {
inline void fill_pair(PathPair& pair, const Vector& w, const Vector& u) {
  pair.distance = (w - u).norm();
  double wn = w.norm(), un = u.norm();
  pair.cosine = (wn > 0.0 && un > 0.0) ? w.dot(u) / (wn * un) : 0.0;
  pair.norm_ratio = (un > 0.0) ? wn / un : std::numeric_limits<double>::infinity();
}
}  // namespace detail

// lambda = 1/(eta t) pairing over all recorded iterates with t > 0.
inline PathComparison compare_paths_lambda_of_t(const GDTrace& trace, const Dataset& data,
                                                double tol) {
  PathComparison comparison;
  comparison.mode = PairingMode::LambdaOfT;
  std::optional<RegPoint> prev;
  for (const auto& rec : trace.records) {
    if (rec.t == 0) continue;
    PathPair pair;
    pair.t = rec.t;
    pair.eta_t = trace.eta * double(rec.t);
    pair.lambda = 1.0 / pair.eta_t;
    RegPoint point = solve_l2_erm(data, pair.lambda, tol, prev ? &prev->u : nullptr);
    detail::fill_pair(pair, rec.w, point.u);
    comparison.pairs.push_back(pair);
    prev = std::move(point);
  }
  return comparison;
}

// Matched-norm pairing: for each t, find lambda such that the component of
// u_lambda along the margin direction w_tilde equals that of w_t. The
// component is monotone as lambda decreases, so bisection over ln(lambda)
// brackets it.
inline PathComparison compare_paths_matched_norm(const GDTrace& trace, const Dataset& data,
                                                 const Vector& w_tilde, double tol) {
  PathComparison comparison;
  comparison.mode = PairingMode::MatchedNorm;
  auto proj = [&](const RegPoint& p) { return p.u.dot(w_tilde); };

  std::optional<RegPoint> warm;
  for (const auto& rec : trace.records) {
    if (rec.t == 0) continue;
    PathPair pair;
    pair.t = rec.t;
    pair.eta_t = trace.eta * double(rec.t);
    double target = rec.w.dot(w_tilde);
    if (target <= 0.0) {
      pair.valid = false;
      pair.diagnostic = "nonpositive margin-direction component";
      comparison.pairs.push_back(pair);
      continue;
    }
    // bracket: proj decreases in lambda; start near 1/(eta t) and widen
    double lo = 1.0 / pair.eta_t, hi = lo;
    RegPoint p_lo = solve_l2_erm(data, lo, tol, warm ? &warm->u : nullptr);
    RegPoint p_hi = p_lo;
    int widen = 0;
    while (proj(p_lo) < target && widen < 200) {
      lo /= 4.0;
      p_lo = solve_l2_erm(data, lo, tol, &p_lo.u);
      ++widen;
    }
    while (proj(p_hi) > target && widen < 200) {
      hi *= 4.0;
      p_hi = solve_l2_erm(data, hi, tol, &p_hi.u);
      ++widen;
    }
    if (proj(p_lo) < target || proj(p_hi) > target) {
      pair.valid = false;
      pair.diagnostic = "bisection bracket failure";
      comparison.pairs.push_back(pair);
      continue;
    }
    RegPoint mid = p_lo;
    for (int it = 0; it < 100 && hi / lo > 1.0 + 1e-12; ++it) {
      double m = std::sqrt(lo * hi);
      mid = solve_l2_erm(data, m, tol, &mid.u);
      if (proj(mid) > target)
        lo = m;
      else
        hi = m;
    }
    pair.lambda = mid.lambda;
    detail::fill_pair(pair, rec.w, mid.u);
    comparison.pairs.push_back(pair);
    warm = std::move(mid);
  }
  return comparison;
}

struct PathDistance {
  double lambda = 0.0;
  double distance = 0.0;
  bool boundary = false;  // minimum attained at a grid edge: widen the grid
};

// Distance from w to the regularization path: grid scan plus golden-section
// refinement between the neighbors of the best grid point.
inline PathDistance min_distance_to_regpath(const Vector& w, const Dataset& data,
                                            const std::vector<double>& lambda_grid,
                                            double tol) {
  if (lambda_grid.size() < 2)
    throw std::invalid_argument("min_distance_to_regpath: grid too small");
  if (lambda_grid.front() / lambda_grid.back() < 1e6)
    throw std::invalid_argument("min_distance_to_regpath: grid must span at least 6 decades");
  auto path = build_reg_path(data, lambda_grid, tol);
  size_t best = 0;
  double best_dist = (w - path[0].u).norm();
  for (size_t i = 1; i < path.size(); ++i) {
    double dist = (w - path[i].u).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  PathDistance result;
  result.lambda = path[best].lambda;
  result.distance = best_dist;
  if (best == 0 || best + 1 == path.size()) {
    result.boundary = true;
    return result;
  }
  // golden-section on ln(lambda) within [grid[best+1], grid[best-1]]
  double a = std::log(lambda_grid[best + 1]), b = std::log(lambda_grid[best - 1]);
  const double inv_phi = 0.61803398874989484820;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  Vector warm = path[best].u;
  auto dist_at = [&](double lnl) {
    RegPoint p = solve_l2_erm(data, std::exp(lnl), tol, &warm);
    warm = p.u;
    return std::make_pair((w - p.u).norm(), std::exp(lnl));
  };
  auto [f1, l1] = dist_at(x1);
  auto [f2, l2] = dist_at(x2);
  for (int it = 0; it < 40 && b - a > 1e-6; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      l2 = l1;
      x1 = b - inv_phi * (b - a);
      std::tie(f1, l1) = dist_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      l1 = l2;
      x2 = a + inv_phi * (b - a);
      std::tie(f2, l2) = dist_at(x2);
    }
  }
  if (f1 < result.distance) {
    result.distance = f1;
    result.lambda = l1;
  }
  if (f2 < result.distance) {
    result.distance = f2;
    result.lambda = l2;
  }
  return result;
}

}  // namespace loglab

#endif  // LOGLAB_REGPATH_HPP
