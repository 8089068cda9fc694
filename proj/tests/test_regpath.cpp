#include <catch2/catch_amalgamated.hpp>

#include "loglab/regpath.hpp"
#include "oracles.hpp"

using namespace loglab;

namespace {
Dataset tiny(const std::vector<std::vector<double>>& rows, const std::vector<int>& ys) {
  Dataset data;
  data.features.resize(int(rows.size()), int(rows[0].size()));
  data.labels.resize(int(ys.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) data.features(int(i), int(j)) = rows[i][j];
    data.labels[int(i)] = ys[i];
  }
  return data;
}
}  // namespace

TEST_CASE("solve_l2_erm validates inputs") {
  auto data = tiny({{1.0}}, {1});
  REQUIRE_THROWS_AS(solve_l2_erm(data, 0.0, 1e-9), std::invalid_argument);
  REQUIRE_THROWS_AS(solve_l2_erm(data, -1.0, 1e-9), std::invalid_argument);
  REQUIRE_THROWS_AS(solve_l2_erm(data, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("contradictory labels cancel to the zero solution") {
  auto data = tiny({{1.0, 2.0}, {1.0, 2.0}}, {1, -1});
  for (double lambda : {10.0, 1.0, 0.01}) {
    auto point = solve_l2_erm(data, lambda, 1e-10);
    REQUIRE(point.u.norm() <= 1e-10);
  }
}

TEST_CASE("fixed-point norm bound holds") {
  auto inst = testing::random_instance(61, 30, 40);
  double max_row = 0.0;
  for (int i = 0; i < inst.data.n(); ++i)
    max_row = std::max(max_row, inst.data.features.row(i).norm());
  for (double lambda : {10.0, 0.5, 0.01, 1e-4}) {
    auto point = solve_l2_erm(inst.data, lambda, 1e-9);
    REQUIRE(point.u.norm() <= max_row / lambda + 1e-9);
    // KKT substitution: u = -grad L(u) / lambda
    Vector rhs = -empirical_gradient(point.u, inst.data) / lambda;
    REQUIRE((point.u - rhs).norm() <= 1e-9 / lambda + 1e-9);
  }
}

TEST_CASE("one-sample scalar instance matches a bisection oracle") {
  auto data = tiny({{1.0}}, {1});
  const double lambda = 0.1;
  auto point = solve_l2_erm(data, lambda, 1e-12);
  // stationarity: sigma(-u) = lambda u, solved independently by bisection
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (sigmoid(-mid) - lambda * mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  REQUIRE(point.u[0] == Catch::Approx(0.5 * (lo + hi)).margin(1e-10));
}

TEST_CASE("huge lambda shrinks the solution") {
  auto data = tiny({{1.0, 0.0}, {0.0, 1.0}}, {1, 1});
  auto point = solve_l2_erm(data, 1e6, 1e-10);
  REQUIRE(point.u.norm() <= 1e-6);
}

TEST_CASE("build_reg_path monotonicity and validation") {
  auto inst = testing::random_instance(62, 25, 35);
  auto path = build_reg_path(inst.data, {10.0, 1.0, 0.1}, 1e-9);
  REQUIRE(path.size() == 3);
  REQUIRE(path[1].u.norm() >= path[0].u.norm() - 1e-9);
  REQUIRE(path[2].u.norm() >= path[1].u.norm() - 1e-9);

  REQUIRE_THROWS_AS(build_reg_path(inst.data, {1.0, 10.0}, 1e-9), std::invalid_argument);
  REQUIRE_THROWS_AS(build_reg_path(inst.data, {1.0, -1.0}, 1e-9), std::invalid_argument);
}

TEST_CASE("separable data risk decreases along the path") {
  auto data = tiny({{1.0, 0.3}, {0.9, -0.5}}, {1, -1});
  auto grid = geometric_lambda_grid(1e-4, 10.0, 2.0);
  auto path = build_reg_path(data, grid, 1e-10);
  double prev = 1e300;
  for (const auto& p : path) {
    double risk = empirical_risk(p.u, data);
    REQUIRE(risk <= prev + 1e-12);
    prev = risk;
  }
  REQUIRE(prev < 0.05);
}

TEST_CASE("path continuity under ratio 1.1 grids") {
  auto inst = testing::random_instance(63, 20, 30);
  auto grid = geometric_lambda_grid(0.01, 1.0, 1.1);
  auto path = build_reg_path(inst.data, grid, 1e-10);
  for (size_t i = 1; i < path.size(); ++i)
    REQUIRE((path[i].u - path[i - 1].u).norm() <= path[i - 1].u.norm() + 1e-12);
}

TEST_CASE("lambda-of-t pairing satisfies the global bounds") {
  auto inst = testing::random_instance(64, 40, 60);
  GDConfig config;
  config.max_iters = 2000;
  config.record_ratio = 2.0;
  config.keep_risk_history = false;
  auto trace = run_gd(inst.data, config);
  auto comparison = compare_paths_lambda_of_t(trace, inst.data, 1e-9);
  REQUIRE(!comparison.pairs.empty());
  const double inv_sqrt2 = 0.70710678118654752440;
  for (const auto& p : comparison.pairs) {
    REQUIRE(p.lambda == Catch::Approx(1.0 / (trace.eta * p.t)).epsilon(1e-12));
    REQUIRE(p.cosine >= inv_sqrt2 - 1e-8);
    REQUIRE(p.norm_ratio >= 0.5857);
    REQUIRE(p.norm_ratio <= 3.4143);
    REQUIRE(p.distance <= trace.at(p.t).w_norm * inv_sqrt2 + 1e-8);
  }
}

TEST_CASE("min_distance_to_regpath recovers on-path points") {
  auto inst = testing::random_instance(65, 20, 30);
  auto grid = geometric_lambda_grid(1e-5, 100.0, 1.3);
  auto path = build_reg_path(inst.data, grid, 1e-10);

  size_t mid = path.size() / 2;
  auto hit = min_distance_to_regpath(path[mid].u, inst.data, grid, 1e-10);
  REQUIRE(hit.distance <= 1e-6);
  REQUIRE_FALSE(hit.boundary);

  auto origin = min_distance_to_regpath(Vector::Zero(inst.data.dim()), inst.data, grid, 1e-10);
  REQUIRE(origin.boundary);
  REQUIRE(origin.lambda == grid.front());
  REQUIRE(origin.distance <= path.front().u.norm() + 1e-12);

  REQUIRE_THROWS_AS(
      min_distance_to_regpath(Vector::Zero(inst.data.dim()), inst.data, {1.0, 0.5}, 1e-9),
      std::invalid_argument);
}
