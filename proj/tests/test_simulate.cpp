#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <set>

#include "transl2e/experiments.hpp"
#include "transl2e/simulate.hpp"

using namespace transl2e;

TEST_CASE("target generator structure") {
  SimConfig cfg;
  auto [data, beta] = gen_target(cfg, 1);
  CHECK(data.n_rows() == 200);
  CHECK(data.n_cols() == 100);
  REQUIRE(beta.size() == 100);
  for (int j = 0; j < 10; ++j) CHECK(beta[j] == 1.0);
  for (int j = 10; j < 100; ++j) CHECK(beta[j] == 0.0);

  // determinism
  auto [again, beta2] = gen_target(cfg, 1);
  CHECK(std::memcmp(data.X.data(), again.X.data(),
                    sizeof(double) * static_cast<std::size_t>(data.X.size())) == 0);
  CHECK(data.y == again.y);
  CHECK(beta == beta2);

  // near-noiseless limit
  SimConfig crisp;
  crisp.tau0 = 1e6;
  crisp.r0 = 0.0;
  crisp.n0 = 50;
  crisp.p = 20;
  auto [clean, beta_c] = gen_target(crisp, 3);
  CHECK((clean.y - clean.X * beta_c).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("target generator moments") {
  SimConfig cfg;
  cfg.n0 = 100000;
  cfg.p = 5;
  cfg.sparse_support = 2;
  auto [data, beta] = gen_target(cfg, 4);
  const double n = static_cast<double>(data.n_rows());
  for (int j = 0; j < 5; ++j) {
    const double mean = data.X.col(j).mean();
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    const double var = (data.X.col(j).array() - mean).square().sum() / (n - 1.0);
    CHECK(var > 0.95);
    CHECK(var < 1.05);
  }
}

TEST_CASE("source generator shift and correlation") {
  SimConfig cfg;
  cfg.p = 40;
  cfg.K = 1;
  cfg.sigma_shift = {0.0};
  auto [tgt, beta_t] = gen_target(cfg, 5);
  auto [src, beta_s] = gen_source(cfg, 0, beta_t, 6);
  CHECK(src.n_rows() == 400);
  CHECK(beta_s == beta_t);  // zero model shift copies beta exactly

  // delta is supported on the leading shift_support coordinates only
  SimConfig shifted = cfg;
  shifted.sigma_shift = {0.7};
  auto [src2, beta_s2] = gen_source(shifted, 0, beta_t, 7);
  bool any_shift = false;
  for (int j = 0; j < 30; ++j) any_shift = any_shift || beta_s2[j] != beta_t[j];
  CHECK(any_shift);
  for (int j = 30; j < 40; ++j) CHECK(beta_s2[j] == beta_t[j]);

  // AR(1) columns: corr(col 1, col 3) = rho^2 = 0.25
  SimConfig big = cfg;
  big.nk = 100000;
  big.p = 5;
  auto [wide, beta_w] = gen_source(big, 0, Eigen::VectorXd::Zero(5), 8);
  const auto col = [&](int j) {
    return (wide.X.col(j).array() - wide.X.col(j).mean()).eval();
  };
  const auto c0 = col(0), c2 = col(2);
  const double corr = (c0 * c2).sum() / std::sqrt(c0.square().sum() * c2.square().sum());
  CHECK(std::abs(corr - 0.25) < 0.01);
  const double adj = (c0 * col(1)).sum() /
                     std::sqrt(c0.square().sum() * col(1).square().sum());
  CHECK(std::abs(adj - 0.5) < 0.01);
}

TEST_CASE("contaminate") {
  Eigen::VectorXd y(5);
  y << 1, 2, 3, 4, 5;
  const Eigen::VectorXd hit = contaminate(y, 0.2);
  Eigen::VectorXd expected(5);
  expected << 11, 2, 3, 4, 5;
  CHECK(hit == expected);

  CHECK(contaminate(y, 0.0) == y);

  const Eigen::VectorXd all = contaminate(y, 1.0);
  for (int i = 0; i < 5; ++i) CHECK(all[i] == y[i] + 10.0);

  // exactly round(r n) entries change
  Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(11, 0.0, 1.0);
  const Eigen::VectorXd z3 = contaminate(z, 0.3);  // round(3.3) = 3
  int changed = 0;
  for (int i = 0; i < 11; ++i) changed += z3[i] != z[i];
  CHECK(changed == 3);
}

TEST_CASE("rel_err and f1") {
  Eigen::VectorXd truth(2), hat(2);
  truth << 1, 0;
  hat << 1, 0;
  CHECK(rel_err(hat, truth) == 0.0);
  CHECK(rel_err(Eigen::VectorXd::Zero(2), truth) == 1.0);
  hat << 0, 1;
  CHECK(rel_err(hat, truth) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(rel_err(hat, Eigen::VectorXd::Zero(2)), std::domain_error);

  Eigen::VectorXd beta_true = Eigen::VectorXd::Zero(30);
  beta_true.head(10).setOnes();
  Eigen::VectorXd exact = beta_true;
  CHECK(f1_score(exact, beta_true).f1 == 1.0);

  Eigen::VectorXd sloppy = beta_true;
  sloppy.tail(10).setConstant(0.2);  // 10 spurious
  const Metrics m = f1_score(sloppy, beta_true);
  CHECK(m.support_tp == 10);
  CHECK(m.support_fp == 10);
  CHECK(m.support_fn == 0);
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CHECK(f1_score(Eigen::VectorXd::Zero(30), beta_true).f1 == 0.0);
  CHECK(f1_score(Eigen::VectorXd::Zero(30), Eigen::VectorXd::Zero(30)).f1 == 1.0);
}

TEST_CASE("experiment table structure and pairing") {
  ExperimentConfig ecfg;
  ecfg.experiment = ExperimentKind::model_shift;
  ecfg.grid = {0.0, 0.3, 0.8};
  ecfg.replicates = 2;
  ecfg.methods = {Method::target_lasso, Method::target_l2e};

  SimConfig base;
  base.n0 = 40;
  base.nk = 30;
  base.p = 10;
  base.K = 1;
  base.sparse_support = 3;
  base.shift_support = 5;
  base.r0 = 0.1;
  base.rk = 0.1;

  const ResultsTable table = run_experiment(ecfg, base, 11);
  CHECK(table.rows.size() == 12);  // 3 grid x 2 replicates x 2 methods

  std::set<std::string> methods;
  for (const auto& r : table.rows) {
    methods.insert(r.method);
    CHECK(r.experiment == "model_shift");
    CHECK(r.f1 >= 0.0);
    CHECK(r.f1 <= 1.0);
    CHECK(r.rel_err >= 0.0);
  }
  CHECK(methods == std::set<std::string>{"target_lasso", "target_l2e"});

  // identical master seed, identical table
  const ResultsTable again = run_experiment(ecfg, base, 11);
  REQUIRE(again.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].rel_err == again.rows[i].rel_err);
    CHECK(table.rows[i].f1 == again.rows[i].f1);
  }

  const auto summary = summarize(table);
  CHECK(summary.size() == 6);  // 3 grid x 2 methods
  for (const auto& s : summary) CHECK(s.n == 2);

  ExperimentConfig bad = ecfg;
  bad.replicates = 0;
  CHECK_THROWS_AS(run_experiment(bad, base, 1), std::invalid_argument);
}

TEST_CASE("stock grids match the study designs") {
  CHECK(stock_grid(ExperimentKind::outlier_prop) ==
        std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
  CHECK(stock_grid(ExperimentKind::model_shift) ==
        std::vector<double>{0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0});
  CHECK(stock_grid(ExperimentKind::precision_shift) ==
        std::vector<double>{0.2, 0.5, 1.0, 2.0, 4.0});
  CHECK(stock_grid(ExperimentKind::dimension) == std::vector<double>{50.0, 250.0, 500.0});
  CHECK(stock_grid(ExperimentKind::source_count) ==
        std::vector<double>{1.0, 3.0, 5.0, 7.0, 9.0});
  CHECK_THROWS_AS(method_from_string("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(experiment_kind_from_string("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(ablation_variant_from_string("bogus"), std::invalid_argument);
}
