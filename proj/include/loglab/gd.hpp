#ifndef LOGLAB_GD_HPP
#define LOGLAB_GD_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/dataset.hpp"
#include "loglab/risk.hpp"

namespace loglab {

enum class Loss { Logistic, Exponential };

namespace detail {
inline double loss_value(Loss loss, double t) {
  return loss == Loss::Logistic ? logistic_loss(t) : std::exp(-t);
}
inline double loss_deriv(Loss loss, double t) {
  return loss == Loss::Logistic ? -sigmoid(-t) : -std::exp(-t);
}
}  // namespace detail

inline double empirical_risk(const Vector& w, const Dataset& data, Loss loss = Loss::Logistic) {
  if (data.n() == 0) throw std::invalid_argument("empirical_risk: empty dataset");
  if (w.size() != data.dim()) throw std::invalid_argument("empirical_risk: dimension mismatch");
  Vector margins = data.features * w;
  double total = 0.0;
  for (int i = 0; i < data.n(); ++i)
    total += detail::loss_value(loss, data.labels[i] * margins[i]);
  return total / data.n();
}

inline Vector empirical_gradient(const Vector& w, const Dataset& data,
                                 Loss loss = Loss::Logistic) {
  if (data.n() == 0) throw std::invalid_argument("empirical_gradient: empty dataset");
  if (w.size() != data.dim()) throw std::invalid_argument("empirical_gradient: dimension mismatch");
  Vector margins = data.features * w;
  Vector coeff(data.n());
  for (int i = 0; i < data.n(); ++i)
    coeff[i] = detail::loss_deriv(loss, data.labels[i] * margins[i]) * data.labels[i];
  return (data.features.transpose() * coeff) / data.n();
}

// Data-dependent smoothness surrogate: the empirical Hessian norm is at most
// (1/n) sum ||x_i||^2 for the logistic loss, floored at 1.
inline std::pair<double, double> default_stepsize(const Dataset& data) {
  if (data.n() == 0) throw std::invalid_argument("default_stepsize: empty dataset");
  double beta_hat = std::max(1.0, data.features.squaredNorm() / data.n());
  return {1.0 / beta_hat, beta_hat};
}

struct StoppingRule {
  enum class Kind { CrossHead, CrossStar, FixedHorizon, GradNorm };
  Kind kind = Kind::FixedHorizon;
  int k = 0;                // cross_head index
  double threshold = 0.0;   // risk threshold (cross rules) or gradient norm epsilon
  std::int64_t horizon = 0;

  std::string label() const {
    switch (kind) {
      case Kind::CrossHead: return "cross_head(" + std::to_string(k) + ")";
      case Kind::CrossStar: return "cross_star";
      case Kind::FixedHorizon: return "fixed_horizon(" + std::to_string(horizon) + ")";
      case Kind::GradNorm: return "grad_norm";
    }
    return "?";
  }
};

inline StoppingRule cross_head_rule(const Dataset& data, const TrueParameter& param, int k) {
  StoppingRule r;
  r.kind = StoppingRule::Kind::CrossHead;
  r.k = k;
  r.threshold = empirical_risk(split_parameter(param, k).first, data);
  return r;
}

inline StoppingRule cross_star_rule(const Dataset& data, const TrueParameter& param) {
  StoppingRule r;
  r.kind = StoppingRule::Kind::CrossStar;
  r.threshold = empirical_risk(param.coeffs, data);
  return r;
}

struct GDConfig {
  double eta = 0.0;  // 0 means use the default 1/beta_hat
  std::int64_t max_iters = 100000;
  double record_ratio = 1.5;  // geometric recording schedule
  Loss loss = Loss::Logistic;
  bool keep_risk_history = true;
};

struct GDRecord {
  std::int64_t t = 0;
  Vector w;
  double emp_risk = 0.0;
  double grad_norm = 0.0;
  double w_norm = 0.0;
};

struct StopEvent {
  std::string rule;
  std::int64_t t = 0;   // first trigger time
  bool resolved = false;
};

struct GDTrace {
  double eta = 0.0;
  double beta_hat = 0.0;
  std::vector<GDRecord> records;
  std::vector<StopEvent> stop_events;
  std::vector<double> risk_history;  // L(w_t) for t = 0..T when enabled
  bool monotone = true;              // empirical risk nonincreasing along the run

  const GDRecord& at(std::int64_t t) const {
    for (const auto& r : records)
      if (r.t == t) return r;
    throw std::invalid_argument("GDTrace: iteration " + std::to_string(t) + " not recorded");
  }
  bool has(std::int64_t t) const {
    for (const auto& r : records)
      if (r.t == t) return true;
    return false;
  }
  std::optional<std::int64_t> stop_time(const std::string& rule) const {
    for (const auto& e : stop_events)
      if (e.rule == rule && e.resolved) return e.t;
    return std::nullopt;
  }
};

// Fixed-stepsize GD from w_0 = 0. Records follow a geometric schedule plus
// the neighborhoods (t-1, t) of every stop event. A rule that never triggers
// is reported unresolved, not thrown.
inline GDTrace run_gd(const Dataset& data, const GDConfig& config,
                      const std::vector<StoppingRule>& rules = {}) {
  auto [eta_def, beta_hat] = default_stepsize(data);
  GDTrace trace;
  trace.eta = config.eta > 0.0 ? config.eta : eta_def;
  trace.beta_hat = beta_hat;
  trace.stop_events.resize(rules.size());
  for (size_t r = 0; r < rules.size(); ++r) trace.stop_events[r].rule = rules[r].label();

  const int d = data.dim();
  Vector w = Vector::Zero(d);
  std::int64_t next_record = 1;
  double prev_risk = 0.0;

  std::vector<GDRecord> pending_prev;  // candidate t-1 records, one step behind

  for (std::int64_t t = 0; t <= config.max_iters; ++t) {
    Vector margins = data.features * w;
    double risk = 0.0;
    Vector coeff(data.n());
    for (int i = 0; i < data.n(); ++i) {
      double m = data.labels[i] * margins[i];
      risk += detail::loss_value(config.loss, m);
      coeff[i] = detail::loss_deriv(config.loss, m) * data.labels[i];
    }
    risk /= data.n();
    Vector grad = (data.features.transpose() * coeff) / data.n();
    double gnorm = grad.norm();

    if (t > 0 && risk > prev_risk * (1.0 + 1e-12) + 1e-300) trace.monotone = false;
    prev_risk = risk;
    if (config.keep_risk_history) trace.risk_history.push_back(risk);

    bool record_now = (t == 0) || (t == next_record) || (t == config.max_iters);
    for (size_t r = 0; r < rules.size(); ++r) {
      if (trace.stop_events[r].resolved) continue;
      const auto& rule = rules[r];
      bool hit = false;
      switch (rule.kind) {
        case StoppingRule::Kind::CrossHead:
        case StoppingRule::Kind::CrossStar:
          hit = risk <= rule.threshold;
          break;
        case StoppingRule::Kind::FixedHorizon:
          hit = t >= rule.horizon;
          break;
        case StoppingRule::Kind::GradNorm:
          hit = gnorm <= rule.threshold;
          break;
      }
      if (hit) {
        trace.stop_events[r].t = t;
        trace.stop_events[r].resolved = true;
        record_now = true;
        if (t > 0) {
          // make sure t-1 is present: it is the last pending record
          bool have = false;
          for (const auto& rec : trace.records) have = have || rec.t == t - 1;
          if (!have && !pending_prev.empty() && pending_prev.back().t == t - 1)
            trace.records.push_back(pending_prev.back());
        }
      }
    }

    if (record_now) {
      GDRecord rec{t, w, risk, gnorm, w.norm()};
      trace.records.push_back(rec);
      while (next_record <= t)
        next_record = std::max(next_record + 1,
                               std::int64_t(std::ceil(next_record * config.record_ratio)));
    } else {
      GDRecord rec{t, w, risk, gnorm, w.norm()};
      pending_prev.clear();
      pending_prev.push_back(std::move(rec));
    }

    if (t < config.max_iters) w -= trace.eta * grad;
  }
  return trace;
}

// GD until the empirical risk first crosses a threshold, run in sample space:
// every iterate lies in the row space of X, so tracking the n coefficients of
// w_t = X'c_t against the Gram matrix costs O(n^2) per step instead of O(nd).
// Returns the crossing iterate and time, or the horizon iterate if unresolved.
inline std::pair<Vector, std::optional<std::int64_t>> run_gd_crossing(
    const Dataset& data, double eta, std::int64_t max_iters, double threshold,
    Loss loss = Loss::Logistic) {
  const int n = data.n();
  Matrix gram = data.features * data.features.transpose();
  Vector c = Vector::Zero(n);       // w = X' c
  Vector s = Vector::Zero(n);       // s = X w
  Vector coeff(n);
  for (std::int64_t t = 0; t <= max_iters; ++t) {
    double risk = 0.0;
    for (int i = 0; i < n; ++i) {
      double m = data.labels[i] * s[i];
      risk += detail::loss_value(loss, m);
      coeff[i] = detail::loss_deriv(loss, m) * data.labels[i];
    }
    risk /= n;
    if (risk <= threshold || t == max_iters) {
      Vector w = data.features.transpose() * c;
      return {w, risk <= threshold ? std::optional<std::int64_t>(t) : std::nullopt};
    }
    c -= (eta / n) * coeff;
    s -= (eta / n) * (gram * coeff);
  }
  return {Vector::Zero(data.dim()), std::nullopt};  // unreachable
}

// First t with L(w_t) <= threshold; threshold above L(w_0) returns 0.
inline std::optional<std::int64_t> oracle_stopping_time(const GDTrace& trace, double threshold) {
  if (trace.risk_history.empty())
    throw std::invalid_argument("oracle_stopping_time: trace has no risk history");
  for (std::int64_t t = 0; t < std::int64_t(trace.risk_history.size()); ++t)
    if (trace.risk_history[size_t(t)] <= threshold) return t;
  return std::nullopt;
}

// Residual of the early-stopping inequality at a recorded iterate: nonnegative
// (up to float error) for every comparator u when eta <= 1/beta_hat.
inline double implicit_bias_residual(const GDTrace& trace, const Dataset& data,
                                     const Vector& u, std::int64_t t,
                                     Loss loss = Loss::Logistic) {
  if (t <= 0) throw std::invalid_argument("implicit_bias_residual: t must be positive");
  const GDRecord& rec = trace.at(t);
  double inv = 1.0 / (2.0 * trace.eta * double(t));
  return empirical_risk(u, data, loss) + u.squaredNorm() * inv -
         (rec.w - u).squaredNorm() * inv - rec.emp_risk;
}

}  // namespace loglab

#endif  // LOGLAB_GD_HPP
