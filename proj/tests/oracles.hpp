// Independent oracles and random-instance helpers shared by the unit and
// acceptance test binaries. Everything here is deliberately implemented
// differently from the library under test.
#ifndef LOGLAB_TESTS_ORACLES_HPP
#define LOGLAB_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "loglab/dataset.hpp"
#include "loglab/margin.hpp"
#include "loglab/rng.hpp"
#include "loglab/spectrum.hpp"

namespace loglab::testing {

// Random instance: random spectrum (power law or random nonincreasing),
// random w*, sampled dataset.
struct RandomInstance {
  CovarianceModel cov;
  TrueParameter param;
  Dataset data;
};

inline RandomInstance random_instance(std::uint64_t seed, int n_max = 200, int d_max = 400) {
  CounterRng rng(seed, 0x7e57);
  int n = 2 + int(rng.next_u64() % std::uint64_t(n_max - 1));
  int d = 2 + int(rng.next_u64() % std::uint64_t(d_max - 1));
  RandomInstance inst;
  if (rng.next_uniform() < 0.5) {
    SpectrumSpec spec;
    spec.kind = SpectrumSpec::Kind::PowerLaw;
    spec.a = 1.2 + 2.0 * rng.next_uniform();
    inst.cov = build_spectrum(spec, d);
  } else {
    std::vector<double> vals(d);
    double v = 1.0;
    for (int i = 0; i < d; ++i) {
      vals[i] = v;
      v *= 0.5 + 0.5 * rng.next_uniform();
    }
    SpectrumSpec spec;
    spec.kind = SpectrumSpec::Kind::Explicit;
    spec.values = vals;
    inst.cov = build_spectrum(spec, d);
  }
  Vector coeffs(d);
  for (int i = 0; i < d; ++i) coeffs[i] = rng.next_gaussian();
  double sn = sigma_norm(coeffs, inst.cov);
  if (sn > 0.0) coeffs *= (0.3 + 2.0 * rng.next_uniform()) / sn;
  inst.param = TrueParameter::make(inst.cov, coeffs);
  inst.data = sample_dataset(inst.cov, inst.param, n, seed ^ 0xdadaULL);
  return inst;
}

// Brute-force max margin: coarse-to-fine random search over the unit sphere.
inline double brute_force_margin(const Dataset& data, std::uint64_t seed) {
  const int d = data.dim();
  CounterRng rng(seed, 0xb1f);
  Vector best = Vector::Zero(d);
  double best_margin = -1e300;
  for (int it = 0; it < 200000; ++it) {
    Vector v(d);
    for (int j = 0; j < d; ++j) v[j] = rng.next_gaussian();
    v /= v.norm();
    double m = min_margin(v, data);
    if (m > best_margin) {
      best_margin = m;
      best = v;
    }
  }
  // local refinement: shrinking Gaussian perturbations around the incumbent
  double radius = 0.3;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (int it = 0; it < 3000; ++it) {
      Vector v = best;
      for (int j = 0; j < d; ++j) v[j] += radius * rng.next_gaussian();
      v /= v.norm();
      double m = min_margin(v, data);
      if (m > best_margin) {
        best_margin = m;
        best = v;
        improved = true;
      }
    }
    if (!improved) radius *= 0.5;
    if (radius < 1e-6) break;
  }
  return best_margin;
}

// Exact hard-margin QP by enumerating active sets: for each candidate support
// S, the minimum-norm w with y_i x_i'w = 1 on S is X_S'(X_S X_S')^{-1} 1.
// The optimum is the feasible candidate with nonnegative multipliers.
inline double combinatorial_max_margin(const Dataset& data) {
  const int n = data.n();
  double best = -1.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    Matrix zs(int(idx.size()), data.dim());
    for (size_t r = 0; r < idx.size(); ++r)
      zs.row(int(r)) = double(data.labels[idx[r]]) * data.features.row(idx[r]);
    Matrix gram = zs * zs.transpose();
    Eigen::FullPivLU<Matrix> lu(gram);
    if (lu.rank() < gram.rows()) continue;
    Vector ones = Vector::Ones(int(idx.size()));
    Vector alpha = lu.solve(ones);
    if (alpha.minCoeff() < -1e-10) continue;  // multiplier sign violated
    Vector w = zs.transpose() * alpha;
    if (min_margin(w, data) < 1.0 - 1e-8) continue;  // infeasible elsewhere
    double gamma = 1.0 / w.norm();
    best = std::max(best, gamma);
  }
  return best;
}

// Comparison-sort oracle for the resorted index order: selection sort with
// the documented tie rule, written independently of the library.
inline std::vector<int> sort_oracle(const CovarianceModel& cov, const Vector& coeffs) {
  const int d = cov.dim;
  std::vector<double> key(d);
  for (int i = 0; i < d; ++i) key[i] = cov.eigenvalues[i] * coeffs[i] * coeffs[i];
  std::vector<int> remaining(d), out;
  std::iota(remaining.begin(), remaining.end(), 0);
  while (!remaining.empty()) {
    size_t arg = 0;
    for (size_t j = 1; j < remaining.size(); ++j)
      if (key[remaining[j]] > key[remaining[arg]]) arg = j;  // strict: ties keep lowest index
    out.push_back(remaining[arg]);
    remaining.erase(remaining.begin() + long(arg));
  }
  return out;
}

// Extended-precision empirical logistic risk with Kahan compensation.
inline double high_precision_risk(const Vector& w, const Dataset& data) {
  long double sum = 0.0L, comp = 0.0L;
  for (int i = 0; i < data.n(); ++i) {
    long double m = 0.0L;
    for (int j = 0; j < data.dim(); ++j)
      m += static_cast<long double>(data.features(i, j)) * static_cast<long double>(w[j]);
    m *= data.labels[i];
    long double loss = m >= 0.0L ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    long double y = loss - comp;
    long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return double(sum / data.n());
}

}  // namespace loglab::testing

#endif  // LOGLAB_TESTS_ORACLES_HPP
