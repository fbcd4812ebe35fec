#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "transl2e/dataset.hpp"
#include "transl2e/penalty.hpp"
#include "transl2e/solver.hpp"

namespace transl2e {

// 20 lambdas spaced evenly on a log scale from 10 down to 1e-4
std::vector<double> default_lambda_grid();

struct CvTable {
  std::vector<double> lambdas;
  Eigen::MatrixXd fold_scores;      // folds x lambdas
  std::vector<double> mean_scores;  // per lambda
};

struct CvResult {
  double best_lambda = 0.0;
  CvTable table;
};

// K-fold cross-validation for the penalized L2E fit. Folds are a seeded
// random partition; fits walk the grid from the largest lambda down with warm
// starts; the validation score is the held-out L2E loss at the training-fold
// (beta, tau). Ties prefer the larger lambda. proto.lambda is ignored.
CvResult cross_validate(const Dataset& data, const PenaltySpec& proto,
                        const std::vector<double>& lambda_grid, int folds,
                        const SolverOptions& opts, std::uint64_t seed);

// cross_validate followed by a warm-started path fit on the full data down to
// the chosen lambda. For PenaltyKind::none this is a single unpenalized fit.
FitResult fit_l2e_cv(const Dataset& data, const PenaltySpec& proto,
                     const std::vector<double>& lambda_grid, int folds,
                     const SolverOptions& opts, std::uint64_t seed);

// Ordinary least-squares lasso with MSE-scored cross-validation; the
// non-robust baseline.
Eigen::VectorXd ls_lasso_cv(const Dataset& data,
                            const std::vector<double>& lambda_grid, int folds,
                            std::uint64_t seed);

namespace detail {
// seeded shuffle-and-chunk partition; every fold has >= 2 rows or throws
std::vector<std::vector<Eigen::Index>> fold_partition(Eigen::Index n, int folds,
                                                      std::uint64_t seed);
}  // namespace detail

}  // namespace transl2e
