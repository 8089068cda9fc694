#ifndef LOGLAB_SPECTRUM_HPP
#define LOGLAB_SPECTRUM_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace loglab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Diagonal covariance in the canonical basis: eigenvalues sorted nonincreasing.
struct CovarianceModel {
  int dim = 0;
  Vector eigenvalues;

  double trace() const { return eigenvalues.sum(); }

  // trace mass beyond the first k eigenvalues, reported alongside results so
  // the truncation level d is auditable
  double tail_trace(int k) const {
    double s = 0.0;
    for (int i = k; i < dim; ++i) s += eigenvalues[i];
    return s;
  }
};

struct SpectrumSpec {
  enum class Kind { PowerLaw, Identity, Explicit };
  Kind kind = Kind::Identity;
  double a = 2.0;                 // power-law exponent, must be > 1
  std::vector<double> values;     // explicit eigenvalues
};

inline CovarianceModel build_spectrum(const SpectrumSpec& spec, int d) {
  if (d < 1) throw std::invalid_argument("build_spectrum: dimension must be positive");
  CovarianceModel cov;
  cov.dim = d;
  cov.eigenvalues.resize(d);
  switch (spec.kind) {
    case SpectrumSpec::Kind::PowerLaw:
      if (spec.a <= 1.0)
        throw std::invalid_argument(
            "build_spectrum: power-law exponent a must exceed 1, otherwise the "
            "trace diverges as d grows");
      for (int i = 0; i < d; ++i) cov.eigenvalues[i] = std::pow(double(i + 1), -spec.a);
      break;
    case SpectrumSpec::Kind::Identity:
      cov.eigenvalues.setOnes();
      break;
    case SpectrumSpec::Kind::Explicit:
      if (int(spec.values.size()) != d)
        throw std::invalid_argument("build_spectrum: explicit eigenvalue list length mismatch");
      for (int i = 0; i + 1 < d; ++i)
        if (spec.values[i] < spec.values[i + 1])
          throw std::invalid_argument("build_spectrum: eigenvalues must be nonincreasing");
      if (spec.values.back() < 0.0)
        throw std::invalid_argument("build_spectrum: eigenvalues must be nonnegative");
      for (int i = 0; i < d; ++i) cov.eigenvalues[i] = spec.values[i];
      break;
  }
  return cov;
}

inline double sigma_norm(const Vector& w, const CovarianceModel& cov) {
  if (w.size() != cov.dim) throw std::invalid_argument("sigma_norm: length mismatch");
  double s = 0.0;
  for (int i = 0; i < cov.dim; ++i) s += cov.eigenvalues[i] * w[i] * w[i];
  return std::sqrt(s);
}

inline double sigma_dot(const Vector& v, const Vector& w, const CovarianceModel& cov) {
  if (v.size() != cov.dim || w.size() != cov.dim)
    throw std::invalid_argument("sigma_dot: length mismatch");
  double s = 0.0;
  for (int i = 0; i < cov.dim; ++i) s += cov.eigenvalues[i] * v[i] * w[i];
  return s;
}

// Permutation pi such that lambda_{pi(i)} * coeffs[pi(i)]^2 is nonincreasing.
// Ties break toward the lowest original index.
inline std::vector<int> resort_indices(const CovarianceModel& cov, const Vector& coeffs) {
  if (coeffs.size() != cov.dim) throw std::invalid_argument("resort_indices: length mismatch");
  std::vector<int> pi(cov.dim);
  std::iota(pi.begin(), pi.end(), 0);
  std::stable_sort(pi.begin(), pi.end(), [&](int i, int j) {
    return cov.eigenvalues[i] * coeffs[i] * coeffs[i] >
           cov.eigenvalues[j] * coeffs[j] * coeffs[j];
  });
  return pi;
}

struct TrueParameter {
  Vector coeffs;          // coordinates of w* in the eigenbasis
  std::vector<int> pi;    // resorted index order
  double sigma_norm = 0.0;

  static TrueParameter make(const CovarianceModel& cov, const Vector& coeffs) {
    TrueParameter p;
    p.coeffs = coeffs;
    p.pi = resort_indices(cov, coeffs);
    p.sigma_norm = loglab::sigma_norm(coeffs, cov);
    return p;
  }
};

// Head carries the k leading resorted coordinates, tail the rest; the supports
// are disjoint so head + tail == coeffs exactly.
inline std::pair<Vector, Vector> split_parameter(const TrueParameter& param, int k) {
  const int d = int(param.coeffs.size());
  if (k < 0 || k > d) throw std::invalid_argument("split_parameter: k out of range");
  Vector head = Vector::Zero(d);
  Vector tail = param.coeffs;
  for (int i = 0; i < k; ++i) {
    int j = param.pi[i];
    head[j] = param.coeffs[j];
    tail[j] = 0.0;
  }
  return {head, tail};
}

}  // namespace loglab

#endif  // LOGLAB_SPECTRUM_HPP
