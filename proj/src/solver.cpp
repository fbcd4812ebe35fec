#include "transl2e/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "transl2e/l2e.hpp"

namespace transl2e {

namespace {

constexpr double kInvTwoSqrtPi = 0.28209479177387814;   // 1 / (2 sqrt(pi))
constexpr double kSqrtTwoOverPi = 0.79788456080286536;  // sqrt(2 / pi)

double soft(double v, double t) {
  const double a = std::abs(v) - t;
  return a > 0.0 ? (v > 0.0 ? a : -a) : 0.0;
}

double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// robust scale start: tau = 1 / (1.4826 MAD(r)), clipped to the box
double tau_from_mad(const Eigen::VectorXd& r, double tau_min, double tau_max) {
  std::vector<double> tmp(r.data(), r.data() + r.size());
  const double med = median_inplace(tmp);
  for (double& v : tmp) v = std::abs(v - med);
  const double mad = median_inplace(tmp);
  if (!(mad > 0.0)) return tau_max;
  return std::clamp(1.0 / (1.4826 * mad), tau_min, tau_max);
}

// One pass of the penalized weighted least-squares subproblem
//   minimize_beta  c sum_i w_i (y_i - x_i' beta)^2 + lambda P1(beta)
// r is kept equal to y - X beta throughout. Returns the max coefficient change.
//
// lasso/none: exact coordinate minimization with col_sq[j] = sum_i w_i x_ij^2.
// group_lasso: one proximal step per group with the exact block Lipschitz
// constant; each step is non-increasing for the subproblem.
double wls_pass(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, double c,
                const PenaltySpec& pen, const Eigen::VectorXd& col_sq,
                const std::vector<Eigen::MatrixXd>& group_gram,
                Eigen::VectorXd& beta, Eigen::VectorXd& r) {
  double max_change = 0.0;
  if (pen.kind == PenaltyKind::group_lasso) {
    for (std::size_t gi = 0; gi < pen.groups.size(); ++gi) {
      const auto& g = pen.groups[gi];
      const int m = static_cast<int>(g.size());
      Eigen::VectorXd grad(m);  // -(1/(2c)) of the smooth gradient: X_g' (w .* r)
      for (int a = 0; a < m; ++a) {
        grad[a] = (X.col(g[a]).array() * w.array() * r.array()).sum();
      }
      const Eigen::MatrixXd& gram = group_gram[gi];
      double lip = 0.0;
      if (m == 1) {
        lip = 2.0 * c * gram(0, 0);
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
        lip = 2.0 * c * es.eigenvalues().maxCoeff();
      }
      Eigen::VectorXd beta_g(m);
      for (int a = 0; a < m; ++a) beta_g[a] = beta[g[a]];
      Eigen::VectorXd updated;
      if (lip <= 0.0) {
        // no curvature in this block: drop it when penalized, keep otherwise
        updated = pen.lambda > 0.0 ? Eigen::VectorXd::Zero(m) : beta_g;
      } else {
        const Eigen::VectorXd z = beta_g + (2.0 * c / lip) * grad;
        const double norm = z.norm();
        const double thr = pen.lambda / lip;
        const double scale = norm > thr ? 1.0 - thr / norm : 0.0;
        updated = scale * z;
      }
      Eigen::VectorXd delta = updated - beta_g;
      if (delta.cwiseAbs().maxCoeff() > 0.0) {
        for (int a = 0; a < m; ++a) {
          if (delta[a] != 0.0) r -= delta[a] * X.col(g[a]);
          beta[g[a]] = updated[a];
        }
        max_change = std::max(max_change, delta.cwiseAbs().maxCoeff());
      }
    }
    return max_change;
  }

  const double thr = pen.kind == PenaltyKind::lasso ? pen.lambda / (2.0 * c) : 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double a_j = col_sq[j];
    const double old = beta[j];
    if (a_j <= 0.0) {
      if (pen.kind == PenaltyKind::lasso && pen.lambda > 0.0 && old != 0.0) {
        r += old * X.col(j);
        beta[j] = 0.0;
        max_change = std::max(max_change, std::abs(old));
      }
      continue;
    }
    const double rho = (X.col(j).array() * w.array() * r.array()).sum() + a_j * old;
    const double next = soft(rho, thr) / a_j;
    const double change = next - old;
    if (change != 0.0) {
      r -= change * X.col(j);
      beta[j] = next;
      max_change = std::max(max_change, std::abs(change));
    }
  }
  return max_change;
}

// golden-section minimizer of h(beta, .) over [tau_min, tau_max], run on the
// log scale; returns the best of the bracket scan and the incumbent
double update_tau(const Eigen::VectorXd& r, double tau_cur, double tau_min,
                  double tau_max) {
  const Eigen::ArrayXd r2 = r.array().square();
  const double n = static_cast<double>(r.size());
  const auto h_of = [&](double tau) {
    const double s = (-0.5 * tau * tau * r2).exp().sum();
    return tau * kInvTwoSqrtPi - tau / n * kSqrtTwoOverPi * s;
  };

  const double inv_phi = 0.6180339887498949;
  double a = std::log(tau_min), b = std::log(tau_max);
  double u = b - inv_phi * (b - a);
  double v = a + inv_phi * (b - a);
  double fu = h_of(std::exp(u));
  double fv = h_of(std::exp(v));
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (fu < fv) {
      b = v;
      v = u;
      fv = fu;
      u = b - inv_phi * (b - a);
      fu = h_of(std::exp(u));
    } else {
      a = u;
      u = v;
      fu = fv;
      v = a + inv_phi * (b - a);
      fv = h_of(std::exp(v));
    }
  }
  double best = std::exp(0.5 * (a + b));
  double f_best = h_of(best);
  for (double cand : {tau_min, tau_max, tau_cur}) {
    const double f = h_of(cand);
    if (f < f_best) {
      f_best = f;
      best = cand;
    }
  }
  return best;
}

}  // namespace

void SolverOptions::validate() const {
  if (max_outer_iter < 1 || inner_cd_iter < 1) {
    throw std::invalid_argument("solver: iteration counts must be positive");
  }
  if (!(rel_tol > 0.0)) throw std::invalid_argument("solver: rel_tol must be positive");
  if (!(tau_min > 0.0) || !(tau_min < tau_max)) {
    throw std::invalid_argument("solver: need 0 < tau_min < tau_max");
  }
}

Eigen::VectorXd ls_penalized_fit(const Dataset& data, const PenaltySpec& penalty,
                                 int max_sweeps) {
  data.validate();
  const int p = static_cast<int>(data.n_cols());
  penalty.validate(p);

  if (penalty.kind == PenaltyKind::none) {
    Eigen::MatrixXd gram = data.X.transpose() * data.X;
    if (data.n_cols() > data.n_rows()) {
      const double ridge = 1e-6 * gram.trace() / static_cast<double>(p);
      gram.diagonal().array() += ridge > 0.0 ? ridge : 1e-10;
    }
    return gram.ldlt().solve(data.X.transpose() * data.y);
  }

  // coordinate descent on (1/(2n)) ||y - X beta||^2 + lambda P1(beta)
  const double c = 0.5 / static_cast<double>(data.n_rows());
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(data.n_rows());
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd r = data.y;
  Eigen::VectorXd col_sq = data.X.array().square().colwise().sum();
  std::vector<Eigen::MatrixXd> group_gram;
  if (penalty.kind == PenaltyKind::group_lasso) {
    for (const auto& g : penalty.groups) {
      Eigen::MatrixXd xg(data.n_rows(), g.size());
      for (std::size_t a = 0; a < g.size(); ++a) xg.col(a) = data.X.col(g[a]);
      group_gram.push_back(xg.transpose() * xg);
    }
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double change = wls_pass(data.X, w, c, penalty, col_sq, group_gram, beta, r);
    if (change < 1e-8 * (1.0 + beta.cwiseAbs().maxCoeff())) break;
  }
  return beta;
}

FitResult fit_structured_l2e(const Dataset& data, const PenaltySpec& penalty,
                             const SolverOptions& opts, std::uint64_t /*seed*/) {
  data.validate();
  opts.validate();
  const int p = static_cast<int>(data.n_cols());
  penalty.validate(p);
  const double n = static_cast<double>(data.n_rows());

  Eigen::VectorXd beta;
  double tau = 0.0;
  switch (opts.init) {
    case SolverOptions::Init::provided:
      if (opts.beta0.size() != p) {
        throw std::invalid_argument("solver: provided beta0 has wrong length");
      }
      beta = opts.beta0;
      tau = std::clamp(opts.tau0, opts.tau_min, opts.tau_max);
      break;
    case SolverOptions::Init::zeros:
      beta = Eigen::VectorXd::Zero(p);
      break;
    case SolverOptions::Init::lasso_warm:
      beta = ls_penalized_fit(data, penalty);
      break;
  }
  Eigen::VectorXd r = data.y - data.X * beta;
  if (opts.init != SolverOptions::Init::provided) {
    tau = tau_from_mad(r, opts.tau_min, opts.tau_max);
  }

  FitResult res;
  res.lambda_used = penalty.lambda;
  res.objective_trace.reserve(static_cast<std::size_t>(opts.max_outer_iter));

  double objective = detail::l2e_loss_from_residuals(r, tau) + penalty.value(beta);
  Eigen::VectorXd w(data.n_rows());
  Eigen::VectorXd col_sq(p);
  std::vector<Eigen::MatrixXd> group_gram;
  if (penalty.kind == PenaltyKind::group_lasso) {
    group_gram.resize(penalty.groups.size());
  }

  int iter = 0;
  for (; iter < opts.max_outer_iter; ++iter) {
    // (a) weights at the current iterate
    w = detail::weights_from_residuals(r, tau);

    // majorizer scale: h(beta, tau) <= const + c sum_i w_i r_i^2
    const double c = tau * tau * tau * kSqrtTwoOverPi / (2.0 * n);

    // (b) beta via the penalized weighted LS subproblem
    if (penalty.kind == PenaltyKind::group_lasso) {
      for (std::size_t gi = 0; gi < penalty.groups.size(); ++gi) {
        const auto& g = penalty.groups[gi];
        Eigen::MatrixXd xg(data.n_rows(), g.size());
        for (std::size_t a = 0; a < g.size(); ++a) xg.col(a) = data.X.col(g[a]);
        group_gram[gi] = xg.transpose() * w.asDiagonal() * xg;
      }
    } else {
      for (int j = 0; j < p; ++j) {
        col_sq[j] = (data.X.col(j).array().square() * w.array()).sum();
      }
    }
    for (int sweep = 0; sweep < opts.inner_cd_iter; ++sweep) {
      const double change =
          wls_pass(data.X, w, c, penalty, col_sq, group_gram, beta, r);
      if (change < 1e-8 * (1.0 + beta.cwiseAbs().maxCoeff())) break;
    }

    // (c) tau by golden section on h(beta, .)
    tau = update_tau(r, tau, opts.tau_min, opts.tau_max);

    const double next = detail::l2e_loss_from_residuals(r, tau) + penalty.value(beta);
    if (!std::isfinite(next)) {
      throw std::runtime_error("solver: non-finite objective at outer iteration " +
                               std::to_string(iter + 1));
    }
    res.objective_trace.push_back(next);
    const double rel_change = std::abs(objective - next) / std::max(1e-30, std::abs(objective));
    objective = next;
    if (rel_change < opts.rel_tol) {
      res.converged = true;
      ++iter;
      break;
    }
  }

  res.beta = std::move(beta);
  res.tau = tau;
  res.weights = detail::weights_from_residuals(r, tau);
  res.iterations = iter;
  res.tau_at_boundary = (tau <= opts.tau_min || tau >= opts.tau_max);
  return res;
}

}  // namespace transl2e
