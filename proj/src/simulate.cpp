#include "transl2e/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "transl2e/rng.hpp"

namespace transl2e {

namespace {

double per_source(const std::vector<double>& v, int k, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string("sim: empty ") + what);
  if (v.size() == 1) return v[0];
  if (k < 0 || static_cast<std::size_t>(k) >= v.size()) {
    throw std::invalid_argument(std::string("sim: no ") + what + " for source " +
                                std::to_string(k));
  }
  return v[static_cast<std::size_t>(k)];
}

Eigen::VectorXd sparse_beta(int p, int support) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  beta.head(support).setOnes();
  return beta;
}

}  // namespace

double SimConfig::sigma_for(int k) const { return per_source(sigma_shift, k, "sigma_shift"); }
double SimConfig::nu_for(int k) const { return per_source(nu, k, "nu"); }

void SimConfig::validate() const {
  if (n0 < 1 || nk < 1 || p < 1) throw std::invalid_argument("sim: counts must be positive");
  if (K < 0) throw std::invalid_argument("sim: K must be nonnegative");
  if (!(tau0 > 0.0)) throw std::invalid_argument("sim: tau0 must be positive");
  if (r0 < 0.0 || r0 > 1.0 || rk < 0.0 || rk > 1.0) {
    throw std::invalid_argument("sim: contamination proportions must lie in [0,1]");
  }
  if (sparse_support < 0 || sparse_support > p) {
    throw std::invalid_argument("sim: sparse_support must lie in [0, p]");
  }
  if (shift_support < 0 || shift_support > p) {
    throw std::invalid_argument("sim: shift_support must lie in [0, p]");
  }
  for (std::size_t k = 0; k < sigma_shift.size(); ++k) {
    if (sigma_shift[k] < 0.0) throw std::invalid_argument("sim: sigma_shift must be >= 0");
  }
  for (std::size_t k = 0; k < nu.size(); ++k) {
    if (!(nu[k] > 0.0)) throw std::invalid_argument("sim: nu must be positive");
  }
}

Eigen::VectorXd contaminate(const Eigen::VectorXd& y, double proportion) {
  if (proportion < 0.0 || proportion > 1.0) {
    throw std::invalid_argument("sim: contamination proportion must lie in [0,1]");
  }
  Eigen::VectorXd out = y;
  const auto m = static_cast<Eigen::Index>(
      std::llround(proportion * static_cast<double>(y.size())));
  if (m > 0) {
    const double shift = 2.0 * y.maxCoeff();  // max of the clean responses
    out.head(m).array() += shift;
  }
  return out;
}

std::pair<Dataset, Eigen::VectorXd> gen_target(const SimConfig& cfg,
                                               std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);

  Dataset d;
  d.X.resize(cfg.n0, cfg.p);
  for (Eigen::Index i = 0; i < cfg.n0; ++i) {
    for (Eigen::Index j = 0; j < cfg.p; ++j) d.X(i, j) = rng.normal();
  }
  const Eigen::VectorXd beta = sparse_beta(cfg.p, cfg.sparse_support);
  const double noise_sd = 1.0 / cfg.tau0;
  Eigen::VectorXd y = d.X * beta;
  for (Eigen::Index i = 0; i < cfg.n0; ++i) y[i] += noise_sd * rng.normal();
  d.y = contaminate(y, cfg.r0);
  d.labels.reserve(static_cast<std::size_t>(cfg.n0));
  for (int i = 0; i < cfg.n0; ++i) d.labels.push_back("t:" + std::to_string(i));
  return {std::move(d), beta};
}

std::pair<Dataset, Eigen::VectorXd> gen_source(const SimConfig& cfg, int k,
                                               const Eigen::VectorXd& beta_target,
                                               std::uint64_t seed) {
  cfg.validate();
  if (beta_target.size() != cfg.p) {
    throw std::invalid_argument("sim: beta_target has wrong length");
  }
  Rng rng(seed);

  // AR(1) rows via the recursion x_1 = z_1, x_j = rho x_{j-1} + sqrt(1-rho^2) z_j,
  // which applies the Cholesky factor of the AR covariance to iid normals
  Dataset d;
  d.X.resize(cfg.nk, cfg.p);
  const double rho = cfg.ar_rho;
  const double scale = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index i = 0; i < cfg.nk; ++i) {
    double prev = rng.normal();
    d.X(i, 0) = prev;
    for (Eigen::Index j = 1; j < cfg.p; ++j) {
      prev = rho * prev + scale * rng.normal();
      d.X(i, j) = prev;
    }
  }

  Eigen::VectorXd beta = beta_target;
  const double sigma = cfg.sigma_for(k);
  for (int j = 0; j < cfg.shift_support; ++j) beta[j] += sigma * rng.normal();

  const double noise_sd = 1.0 / (cfg.nu_for(k) * cfg.tau0);
  Eigen::VectorXd y = d.X * beta;
  for (Eigen::Index i = 0; i < cfg.nk; ++i) y[i] += noise_sd * rng.normal();
  d.y = contaminate(y, cfg.rk);
  d.labels.reserve(static_cast<std::size_t>(cfg.nk));
  for (int i = 0; i < cfg.nk; ++i) {
    d.labels.push_back("s" + std::to_string(k) + ":" + std::to_string(i));
  }
  return {std::move(d), std::move(beta)};
}

double rel_err(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_true) {
  if (beta_hat.size() != beta_true.size()) {
    throw std::invalid_argument("metrics: coefficient lengths differ");
  }
  const double denom = beta_true.norm();
  if (!(denom > 0.0)) throw std::domain_error("metrics: true coefficients are all zero");
  return (beta_hat - beta_true).norm() / denom;
}

Metrics f1_score(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_true,
                 double zero_tol) {
  if (beta_hat.size() != beta_true.size()) {
    throw std::invalid_argument("metrics: coefficient lengths differ");
  }
  if (zero_tol < 0.0) throw std::invalid_argument("metrics: zero_tol must be >= 0");
  Metrics m;
  for (Eigen::Index j = 0; j < beta_hat.size(); ++j) {
    const bool est = std::abs(beta_hat[j]) > zero_tol;
    const bool truth = std::abs(beta_true[j]) > zero_tol;
    m.support_tp += est && truth;
    m.support_fp += est && !truth;
    m.support_fn += !est && truth;
  }
  const int denom = 2 * m.support_tp + m.support_fp + m.support_fn;
  m.f1 = denom == 0 ? 1.0 : 2.0 * m.support_tp / static_cast<double>(denom);
  return m;
}

}  // namespace transl2e
