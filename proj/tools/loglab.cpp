// loglab: command-line driver for the logistic-regression simulation lab.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "loglab/experiments.hpp"

namespace {

using namespace loglab;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  bool svg = false;
  std::int64_t mc_budget = 0;
  int quad_order = 0;
  double lambda_min = 0.0, lambda_max = 0.0, lambda_ratio = 0.0;
};

void add_common(CLI::App* app, CommonOpts& opts) {
  app->add_option("--config", opts.config_path, "JSON config file");
  app->add_option("--seed", opts.seed, "dataset seed override")->each([&](const std::string&) {
    opts.seed_set = true;
  });
  app->add_option("--out", opts.out_dir, "output directory");
  app->add_flag("--svg", opts.svg, "emit SVG charts");
  app->add_option("--mc-budget", opts.mc_budget, "Monte Carlo sample count override");
  app->add_option("--quad-order", opts.quad_order, "quadrature order override");
  app->add_option("--lambda-min", opts.lambda_min, "smallest lambda on the grid");
  app->add_option("--lambda-max", opts.lambda_max, "largest lambda on the grid");
  app->add_option("--lambda-ratio", opts.lambda_ratio, "geometric grid ratio");
}

ExperimentConfig load_config(const CommonOpts& opts, const std::string& default_id) {
  ExperimentConfig config = default_config(default_id);
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::runtime_error("cannot open config file " + opts.config_path);
    json j = json::parse(in);
    config = ExperimentConfig::from_json(j, std::move(config));
  }
  if (config.id.empty()) config.id = default_id;
  if (opts.seed_set) config.data.seed = opts.seed;
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  if (opts.svg) config.svg = true;
  if (opts.mc_budget > 0) config.mc_budget = opts.mc_budget;
  if (opts.quad_order > 0) config.quad_order = opts.quad_order;
  if (opts.lambda_min > 0.0) config.lambda_min = opts.lambda_min;
  if (opts.lambda_max > 0.0) config.lambda_max = opts.lambda_max;
  if (opts.lambda_ratio > 1.0) config.lambda_ratio = opts.lambda_ratio;
  return config;
}

void emit_svg(const ExperimentOutcome& outcome, const ExperimentConfig& config) {
  if (!config.svg || outcome.tables.empty()) return;
  const ResultTable& t = outcome.tables.front();
  if (t.rows.size() < 2 || t.columns.size() < 3) return;
  std::vector<SvgSeries> series;
  const char* palette[] = {"#1f6fb4", "#d1495b", "#3a7d44", "#8e5ba6", "#c97b1e"};
  for (size_t c = 2; c < std::min<size_t>(t.columns.size(), 7); ++c) {
    SvgSeries s;
    s.label = t.columns[c];
    s.color = palette[(c - 2) % 5];
    for (const auto& row : t.rows) {
      s.x.push_back(row[1] > 0 ? row[1] : row[0]);
      s.y.push_back(row[c]);
    }
    series.push_back(std::move(s));
  }
  write_svg_chart(config.out_dir + "/" + t.name + ".svg", t.name, series, true);
}

int finish(const ExperimentOutcome& outcome, const ExperimentConfig& config) {
  write_outcome(outcome, config);
  emit_svg(outcome, config);
  for (const auto& c : outcome.checks)
    std::printf("%-45s %s  (%.6g)\n", c.name.c_str(), c.pass ? "pass" : "FAIL", c.value);
  return outcome.all_pass() ? 0 : 1;
}

int cmd_gen_data(const CommonOpts& opts) {
  ExperimentConfig config = load_config(opts, "gen-data");
  Problem prob = make_problem(config.data);
  std::filesystem::create_directories(config.out_dir);
  save_dataset_csv(prob.data, config.out_dir + "/dataset.csv");
  json sidecar;
  sidecar["seed"] = config.data.seed;
  sidecar["config_hash"] = fnv1a_hash(config.to_json().dump());
  sidecar["version"] = "0.1.0";
  sidecar["n"] = prob.data.n();
  sidecar["d"] = prob.data.dim();
  sidecar["sigma_norm_wstar"] = prob.param.sigma_norm;
  sidecar["trace_sigma"] = prob.cov.trace();
  write_sidecar(sidecar, config.out_dir + "/dataset.json");
  return 0;
}

int cmd_run_gd(const CommonOpts& opts) {
  ExperimentConfig config = load_config(opts, "run-gd");
  Problem prob = make_problem(config.data);
  auto [eta_auto, beta_hat] = default_stepsize(prob.data);
  GDConfig gd;
  gd.eta = config.eta > 0.0 ? config.eta : eta_auto;
  gd.max_iters = config.eta_t_max > 0.0 ? std::int64_t(std::ceil(config.eta_t_max / gd.eta))
                                        : config.max_iters;
  gd.record_ratio = config.record_ratio;
  gd.keep_risk_history = false;
  std::vector<StoppingRule> rules{cross_head_rule(prob.data, prob.param, config.data.head),
                                  cross_star_rule(prob.data, prob.param)};
  GDTrace trace = run_gd(prob.data, gd, rules);

  ResultTable table;
  table.name = "trace";
  table.columns = {"t", "eta_t", "emp_risk", "grad_norm", "w_norm"};
  for (const auto& rec : trace.records)
    table.add_row({double(rec.t), trace.eta * rec.t, rec.emp_risk, rec.grad_norm, rec.w_norm});

  ExperimentOutcome outcome;
  outcome.tables.push_back(table);
  outcome.marks["eta"] = trace.eta;
  outcome.marks["beta_hat"] = trace.beta_hat;
  outcome.marks["monotone"] = trace.monotone;
  for (const auto& e : trace.stop_events)
    outcome.marks["stop_" + e.rule] = e.resolved ? json(e.t) : json("unresolved");
  outcome.checks.push_back({"emp_risk_monotone", trace.monotone, 0.0});
  return finish(outcome, config);
}

int cmd_run_regpath(const CommonOpts& opts) {
  ExperimentConfig config = load_config(opts, "run-regpath");
  Problem prob = make_problem(config.data);
  auto grid = geometric_lambda_grid(config.lambda_min, config.lambda_max, config.lambda_ratio);
  auto path = build_reg_path(prob.data, grid, config.solver_tol);

  ResultTable table;
  table.name = "path";
  table.columns = {"lambda", "u_norm", "emp_risk", "kkt_residual"};
  bool norm_monotone = true, kkt_ok = true;
  double prev_norm = -1.0;
  for (const auto& p : path) {
    double risk = empirical_risk(p.u, prob.data);
    table.add_row({p.lambda, p.u.norm(), risk, p.kkt_residual});
    if (prev_norm >= 0.0 && p.u.norm() < prev_norm * (1.0 - 1e-9)) norm_monotone = false;
    prev_norm = p.u.norm();
    kkt_ok = kkt_ok && p.kkt_residual <= config.solver_tol;
  }
  ExperimentOutcome outcome;
  outcome.tables.push_back(table);
  outcome.checks.push_back({"kkt_within_tolerance", kkt_ok, config.solver_tol});
  outcome.checks.push_back({"u_norm_nonincreasing_in_lambda", norm_monotone, 0.0});
  return finish(outcome, config);
}

int cmd_margin(const CommonOpts& opts) {
  ExperimentConfig config = load_config(opts, "margin");
  Problem prob = make_problem(config.data);
  SeparabilityReport report = check_separability(prob.data);

  ExperimentOutcome outcome;
  ResultTable table;
  table.name = "margin";
  table.columns = {"separable", "gamma", "support_size", "assumption_support_rank"};
  if (report.separable) {
    DualSolution dual = solve_max_margin_dual(prob.data);
    bool assumption = support_rank_condition(prob.data, dual);
    table.add_row({1.0, dual.gamma, double(dual.support_set.size()), assumption ? 1.0 : 0.0});
    outcome.marks["support_set"] = dual.support_set;
    outcome.marks["kkt_residual"] = dual.kkt_residual;
    outcome.checks.push_back({"margin_positive", dual.gamma > 0.0, dual.gamma});
  } else {
    table.add_row({0.0, 0.0, 0.0, 0.0});
    Matrix z(prob.data.n(), prob.data.dim());
    for (int i = 0; i < prob.data.n(); ++i)
      z.row(i) = double(prob.data.labels[i]) * prob.data.features.row(i);
    double witness_norm = (z.transpose() * report.witness_weights).norm();
    outcome.marks["witness_norm"] = witness_norm;
    outcome.checks.push_back({"witness_near_zero", witness_norm <= 1e-6, witness_norm});
  }
  outcome.marks["route"] = report.route;
  outcome.tables.push_back(table);
  return finish(outcome, config);
}

int cmd_risk_eval(const CommonOpts& opts) {
  ExperimentConfig config = load_config(opts, "risk-eval");
  CovarianceModel cov = build_spectrum_from_spec(config.data);
  TrueParameter param = build_parameter_from_spec(config.data, cov);
  auto grid = gauss_hermite(config.quad_order);

  JointSummary s = joint_summary(param.coeffs, param.coeffs, cov);
  RiskTriple quad = quadrature_risks(s, grid);
  RiskTriple mc = monte_carlo_risks(param.coeffs, param.coeffs, cov, config.mc_budget,
                                    config.data.seed + 0x52495345ULL);

  ResultTable table;
  table.name = "risk";
  table.columns = {"method",   "logistic",    "zero_one", "calibration",
                   "logistic_se", "zero_one_se", "calibration_se"};
  table.add_row({0.0, quad.logistic, quad.zero_one, quad.calibration, 0.0, 0.0, 0.0});
  table.add_row({1.0, mc.logistic, mc.zero_one, mc.calibration, mc.logistic_se, mc.zero_one_se,
                 mc.calibration_se});

  ExperimentOutcome outcome;
  outcome.tables.push_back(table);
  outcome.marks["method_codes"] = {{"0", "quadrature"}, {"1", "monte_carlo"}};
  outcome.marks["sigma_norm_wstar"] = param.sigma_norm;
  bool agree = std::abs(quad.logistic - mc.logistic) <= 5.0 * mc.logistic_se + 1e-6 &&
               std::abs(quad.zero_one - mc.zero_one) <= 5.0 * mc.zero_one_se + 1e-6 &&
               std::abs(quad.calibration - mc.calibration) <= 5.0 * mc.calibration_se + 1e-6;
  outcome.checks.push_back({"quadrature_within_5se_of_monte_carlo", agree, 0.0});
  return finish(outcome, config);
}

int cmd_exp(const std::string& which, const CommonOpts& opts) {
  ExperimentConfig config = load_config(opts, which);
  ExperimentOutcome outcome;
  if (which == "figure1")
    outcome = exp_figure1(config);
  else if (which == "divergence")
    outcome = exp_divergence(config);
  else if (which == "separation")
    outcome = exp_separation(config);
  else if (which == "path-compare")
    outcome = exp_path_compare(config);
  else if (which == "counterexample")
    outcome = exp_counterexample(config);
  else
    throw std::runtime_error("unknown experiment " + which);
  return finish(outcome, config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation lab for overparameterized logistic regression"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string exp_name;

  auto* gen = app.add_subcommand("gen-data", "sample a dataset and write it as CSV");
  add_common(gen, opts);
  auto* gd = app.add_subcommand("run-gd", "run gradient descent and export the trace");
  add_common(gd, opts);
  auto* rp = app.add_subcommand("run-regpath", "solve the l2 regularization path");
  add_common(rp, opts);
  auto* mg = app.add_subcommand("margin", "separability and max-margin analysis");
  add_common(mg, opts);
  auto* re = app.add_subcommand("risk-eval", "population risk oracles for the true parameter");
  add_common(re, opts);
  auto* ex = app.add_subcommand("exp", "run a full experiment");
  ex->add_option("name", exp_name,
                 "figure1|divergence|separation|path-compare|counterexample")
      ->required();
  add_common(ex, opts);

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return cmd_gen_data(opts);
    if (gd->parsed()) return cmd_run_gd(opts);
    if (rp->parsed()) return cmd_run_regpath(opts);
    if (mg->parsed()) return cmd_margin(opts);
    if (re->parsed()) return cmd_risk_eval(opts);
    if (ex->parsed()) return cmd_exp(exp_name, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
