#include "transl2e/l2e.hpp"

#include <cmath>
#include <stdexcept>

namespace transl2e {

namespace {

constexpr double kInvTwoSqrtPi = 0.28209479177387814;   // 1 / (2 sqrt(pi))
constexpr double kSqrtTwoOverPi = 0.79788456080286536;  // sqrt(2 / pi)

void check_args(const Eigen::VectorXd& beta, double tau, const Dataset& data) {
  data.validate();
  if (beta.size() != data.n_cols()) {
    throw std::invalid_argument("l2e: beta length must equal the column count");
  }
  if (!(tau > 0.0)) throw std::domain_error("l2e: tau must be positive");
}

}  // namespace

namespace detail {

double l2e_loss_from_residuals(const Eigen::VectorXd& r, double tau) {
  const double n = static_cast<double>(r.size());
  const double s = (-0.5 * tau * tau * r.array().square()).exp().sum();
  return tau * kInvTwoSqrtPi - tau / n * kSqrtTwoOverPi * s;
}

Eigen::VectorXd weights_from_residuals(const Eigen::VectorXd& r, double tau) {
  return (-0.5 * tau * tau * r.array().square()).exp();
}

}  // namespace detail

double l2e_loss(const Eigen::VectorXd& beta, double tau, const Dataset& data) {
  check_args(beta, tau, data);
  const Eigen::VectorXd r = data.y - data.X * beta;
  return detail::l2e_loss_from_residuals(r, tau);
}

Eigen::VectorXd case_weights(const Eigen::VectorXd& beta, double tau,
                             const Dataset& data) {
  check_args(beta, tau, data);
  const Eigen::VectorXd r = data.y - data.X * beta;
  return detail::weights_from_residuals(r, tau);
}

std::pair<Eigen::VectorXd, double> l2e_gradient(const Eigen::VectorXd& beta,
                                                double tau, const Dataset& data) {
  check_args(beta, tau, data);
  const double n = static_cast<double>(data.n_rows());
  const Eigen::VectorXd r = data.y - data.X * beta;
  const Eigen::VectorXd w = detail::weights_from_residuals(r, tau);

  // d/dbeta [-tau/n sqrt(2/pi) sum exp(-tau^2 r^2/2)] = -(tau^3/n) sqrt(2/pi) X'(w.*r)
  Eigen::VectorXd grad_beta =
      -(tau * tau * tau / n) * kSqrtTwoOverPi * (data.X.transpose() * w.cwiseProduct(r));

  // d/dtau [tau e^{-tau^2 r^2/2}] = w (1 - tau^2 r^2)
  const double s = (w.array() * (1.0 - tau * tau * r.array().square())).sum();
  const double grad_tau = kInvTwoSqrtPi - kSqrtTwoOverPi / n * s;

  return {std::move(grad_beta), grad_tau};
}

}  // namespace transl2e
