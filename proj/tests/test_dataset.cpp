#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>

#include "loglab/dataset.hpp"
#include "loglab/risk.hpp"

using namespace loglab;

namespace {
CovarianceModel identity_cov(int d) {
  SpectrumSpec spec;
  spec.kind = SpectrumSpec::Kind::Identity;
  return build_spectrum(spec, d);
}
}  // namespace

TEST_CASE("sample_dataset is deterministic in the seed") {
  auto cov = identity_cov(5);
  Vector coeffs = Vector::Ones(5);
  auto param = TrueParameter::make(cov, coeffs);
  auto a = sample_dataset(cov, param, 50, 42);
  auto b = sample_dataset(cov, param, 50, 42);
  REQUIRE(a.features == b.features);
  REQUIRE(a.labels == b.labels);
  auto c = sample_dataset(cov, param, 50, 43);
  REQUIRE(a.features != c.features);
}

TEST_CASE("sample_dataset with w* = 0 gives fair-coin labels") {
  auto cov = identity_cov(3);
  auto param = TrueParameter::make(cov, Vector::Zero(3));
  const int n = 10000;
  auto data = sample_dataset(cov, param, n, 7);
  double mean = data.labels.cast<double>().mean();
  REQUIRE(std::abs(mean) <= 4.0 / std::sqrt(double(n)));
}

TEST_CASE("sample_dataset strong signal aligns labels with the score") {
  auto cov = identity_cov(1);
  Vector coeffs(1);
  coeffs << 100.0;  // ||w*||_Sigma = 100
  auto param = TrueParameter::make(cov, coeffs);
  const int n = 10000;
  auto data = sample_dataset(cov, param, n, 11);
  int agree = 0;
  for (int i = 0; i < n; ++i) {
    double score = data.features(i, 0) * coeffs[0];
    if (double(data.labels[i]) * score > 0.0) ++agree;
  }
  REQUIRE(double(agree) / n >= 0.98);
}

TEST_CASE("label-conditional frequency matches the logistic law per decile bin") {
  auto cov = identity_cov(4);
  Vector coeffs = Vector::Ones(4) * 0.5;
  auto param = TrueParameter::make(cov, coeffs);
  const int n = 100000;
  auto data = sample_dataset(cov, param, n, 13);

  std::vector<double> scores(n);
  for (int i = 0; i < n; ++i) scores[i] = data.features.row(i).dot(coeffs);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });

  for (int bin = 0; bin < 10; ++bin) {
    int lo = bin * n / 10, hi = (bin + 1) * n / 10;
    double head = 0.0, predicted = 0.0;
    for (int j = lo; j < hi; ++j) {
      head += data.labels[order[j]] == 1 ? 1.0 : 0.0;
      predicted += sigmoid(scores[order[j]]);
    }
    const double m = hi - lo;
    head /= m;
    predicted /= m;
    double se = std::sqrt(std::max(predicted * (1.0 - predicted), 1e-12) / m);
    INFO("bin " << bin << " head " << head << " predicted " << predicted << " se " << se);
    REQUIRE(std::abs(head - predicted) <= 5.0 * se);
  }
}

TEST_CASE("dataset CSV round trip") {
  auto cov = identity_cov(3);
  Vector coeffs(3);
  coeffs << 1.0, -0.5, 0.25;
  auto param = TrueParameter::make(cov, coeffs);
  auto data = sample_dataset(cov, param, 20, 5);

  auto path = std::filesystem::temp_directory_path() / "loglab_dataset_test.csv";
  save_dataset_csv(data, path.string());
  auto loaded = load_dataset_csv(path.string());
  REQUIRE(loaded.n() == data.n());
  REQUIRE(loaded.dim() == data.dim());
  REQUIRE(loaded.labels == data.labels);
  REQUIRE(loaded.features.isApprox(data.features, 1e-15));
  std::filesystem::remove(path);
}

TEST_CASE("counter rng streams are reproducible and in range") {
  CounterRng a(1, 2), b(1, 2), c(1, 3);
  for (int i = 0; i < 100; ++i) {
    double u = a.next_uniform();
    REQUIRE(u == b.next_uniform());
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
  bool differs = false;
  CounterRng a2(1, 2);
  for (int i = 0; i < 10; ++i) differs = differs || a2.next_u64() != c.next_u64();
  REQUIRE(differs);
}
