#ifndef LOGLAB_DATASET_HPP
#define LOGLAB_DATASET_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "loglab/rng.hpp"
#include "loglab/spectrum.hpp"

namespace loglab {

struct Dataset {
  Matrix features;          // n x d, rows are samples
  Eigen::VectorXi labels;   // entries are +1 or -1
  std::uint64_t seed = 0;

  int n() const { return int(features.rows()); }
  int dim() const { return int(features.cols()); }
};

// x_i has independent N(0, lambda_j) coordinates; y_i follows the logistic
// label law with head probability sigmoid(x_i' w*). Each row draws from its
// own counter-based stream, so output is independent of evaluation order.
inline Dataset sample_dataset(const CovarianceModel& cov, const TrueParameter& param,
                              int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be positive");
  if (param.coeffs.size() != cov.dim)
    throw std::invalid_argument("sample_dataset: parameter/covariance dimension mismatch");
  const int d = cov.dim;
  Vector sd(d);
  for (int j = 0; j < d; ++j) sd[j] = std::sqrt(cov.eigenvalues[j]);

  Dataset data;
  data.features.resize(n, d);
  data.labels.resize(n);
  data.seed = seed;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(seed, std::uint64_t(i));
    double score = 0.0;
    for (int j = 0; j < d; ++j) {
      double x = sd[j] * rng.next_gaussian();
      data.features(i, j) = x;
      score += x * param.coeffs[j];
    }
    double p_head = 1.0 / (1.0 + std::exp(-score));
    data.labels[i] = (rng.next_uniform() < p_head) ? 1 : -1;
  }
  return data;
}

// CSV schema: header "y,x_1,...,x_d", one row per sample.
inline void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset_csv: cannot open " + path);
  out << "y";
  for (int j = 0; j < data.dim(); ++j) out << ",x_" << (j + 1);
  out << "\n";
  out.precision(17);
  for (int i = 0; i < data.n(); ++i) {
    out << data.labels[i];
    for (int j = 0; j < data.dim(); ++j) out << "," << data.features(i, j);
    out << "\n";
  }
}

inline Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_dataset_csv: empty file");
  int d = -1;  // count columns from header
  {
    int commas = 0;
    for (char c : line)
      if (c == ',') ++commas;
    d = commas;
  }
  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    labels.push_back(std::stoi(cell));
    for (int j = 0; j < d; ++j) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("load_dataset_csv: short row");
      values.push_back(std::stod(cell));
    }
  }
  Dataset data;
  const int n = int(labels.size());
  data.features.resize(n, d);
  data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    data.labels[i] = labels[i];
    if (data.labels[i] != 1 && data.labels[i] != -1)
      throw std::runtime_error("load_dataset_csv: labels must be +1 or -1");
    for (int j = 0; j < d; ++j) data.features(i, j) = values[size_t(i) * d + j];
  }
  return data;
}

}  // namespace loglab

#endif  // LOGLAB_DATASET_HPP
