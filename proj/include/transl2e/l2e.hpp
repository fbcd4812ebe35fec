#pragma once

#include <Eigen/Dense>
#include <utility>

#include "transl2e/dataset.hpp"

namespace transl2e {

// Gaussian L2E loss for linear regression with residuals r_i = y_i - x_i' beta:
//
//   h(beta, tau) = tau / (2 sqrt(pi)) - (tau / n) sqrt(2 / pi) sum_i exp(-tau^2 r_i^2 / 2)
//
// Minimizing h over (beta, tau) is a robust alternative to least squares; the
// exponential factors double as case weights that fade out outlying rows.
double l2e_loss(const Eigen::VectorXd& beta, double tau, const Dataset& data);

// w_i = exp(-tau^2 r_i^2 / 2), in (0,1]; w_i = 1 exactly when r_i = 0
Eigen::VectorXd case_weights(const Eigen::VectorXd& beta, double tau,
                             const Dataset& data);

// analytic gradient (dh/dbeta, dh/dtau)
std::pair<Eigen::VectorXd, double> l2e_gradient(const Eigen::VectorXd& beta,
                                                double tau, const Dataset& data);

namespace detail {
// loss and weights from precomputed residuals; shared with the solver
double l2e_loss_from_residuals(const Eigen::VectorXd& r, double tau);
Eigen::VectorXd weights_from_residuals(const Eigen::VectorXd& r, double tau);
}  // namespace detail

}  // namespace transl2e
