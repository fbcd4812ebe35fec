#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "transl2e/dataset.hpp"

namespace transl2e {

// Generator knobs for one synthetic study. sigma_shift and nu hold one value
// per source, or a single shared value broadcast to all K sources.
struct SimConfig {
  int n0 = 200;
  int nk = 400;
  int p = 100;
  int K = 0;
  std::vector<double> sigma_shift{0.0};  // model shift sd per source
  double tau0 = 1.0;                     // target noise precision
  std::vector<double> nu{1.0};           // precision shift per source
  double r0 = 0.0;                       // target contamination proportion
  double rk = 0.0;                       // source contamination proportion
  int shift_support = 30;                // leading coords carrying the shift
  int sparse_support = 10;               // leading coords equal to 1 in beta*
  double ar_rho = 0.5;                   // source AR(1) correlation
  std::uint64_t seed = 0;

  double sigma_for(int k) const;
  double nu_for(int k) const;
  void validate() const;
};

// Target cohort: iid standard normal covariates, beta* = (1,...,1,0,...,0),
// Gaussian noise with precision tau0, then the leading round(r0 n0) responses
// shifted up by twice the clean maximum.
std::pair<Dataset, Eigen::VectorXd> gen_target(const SimConfig& cfg,
                                               std::uint64_t seed);

// Source cohort k: AR(1) covariates, beta*_k = beta* + delta with delta
// supported on the leading shift_support coordinates, noise precision
// nu_k tau0, contamination proportion rk.
std::pair<Dataset, Eigen::VectorXd> gen_source(const SimConfig& cfg, int k,
                                               const Eigen::VectorXd& beta_target,
                                               std::uint64_t seed);

// Shifts the leading round(proportion * n) entries up by 2 max(y); the max is
// taken over the clean vector before any shift.
Eigen::VectorXd contaminate(const Eigen::VectorXd& y, double proportion);

// ||beta_hat - beta_true||_2 / ||beta_true||_2
double rel_err(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_true);

struct Metrics {
  double rel_err = 0.0;
  double f1 = 0.0;
  int support_tp = 0;
  int support_fp = 0;
  int support_fn = 0;
};

// Support-recovery F1 = 2TP / (2TP + FP + FN); a coefficient is selected when
// |beta_j| > zero_tol. Empty true and estimated supports count as F1 = 1.
// rel_err is left for the caller to fill.
Metrics f1_score(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_true,
                 double zero_tol = 1e-8);

}  // namespace transl2e
