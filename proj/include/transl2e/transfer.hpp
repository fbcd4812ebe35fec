#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "transl2e/cross_validation.hpp"
#include "transl2e/dataset.hpp"
#include "transl2e/penalty.hpp"
#include "transl2e/selection.hpp"
#include "transl2e/solver.hpp"

namespace transl2e {

struct TransferConfig {
  PenaltyKind penalty_kind = PenaltyKind::lasso;  // steps 1 and 2
  std::vector<std::vector<int>> groups;           // when penalty_kind is group_lasso
  std::vector<double> lambda_grid = default_lambda_grid();
  std::vector<double> mu_grid = default_lambda_grid();  // de-biasing step
  int folds = 5;
  SelectionConfig selection;
  SolverOptions solver;
  std::uint64_t seed = 0;
};

struct SourceDetection {
  FitResult fit;  // on the stacked target+source data, at the CV lambda_k
  SelectionReport report;
  Dataset selected;
  double lambda_k = 0.0;
};

struct DebiasResult {
  Eigen::VectorXd delta;
  Eigen::VectorXd beta_final;
  double mu = 0.0;
};

struct TransferResult {
  Eigen::VectorXd beta_colearn;
  Eigen::VectorXd delta;
  Eigen::VectorXd beta_final;  // beta_colearn + delta
  double tau_colearn = 1.0;
  std::vector<SourceDetection> per_source;
  std::vector<double> lambda_k;
  double lambda = 0.0;
  double mu = 0.0;
  std::vector<std::string> source_ids;
};

// Sub-stream labels used to fan the master seed out; one stream per stage and
// per source id, so reordering or adding sources never perturbs the others.
std::uint64_t stage_seed(std::uint64_t master, const std::string& label);

// Stacks the target above the source, cross-validates lambda_k, fits the
// penalized L2E model on the merged data, splits the converged weights into
// target and source parts, and runs importance weighting plus accept-reject.
// source_id keys the seed streams; trans_l2e defaults it to the list index.
SourceDetection detect_and_select(const Dataset& target, const Dataset& source,
                                  const TransferConfig& cfg,
                                  const std::string& source_id);

// Penalized L2E fit on target rows followed by the selected source rows in
// list order; with every selection empty this is exactly the target-only fit.
FitResult co_learn(const Dataset& target, const std::vector<Dataset>& selected,
                   const TransferConfig& cfg);

// Sparse L2E regression of the co-learning residuals y - X beta_colearn on X;
// the fitted coefficients are the correction delta.
DebiasResult debias(const Dataset& target, const Eigen::VectorXd& beta_colearn,
                    const TransferConfig& cfg);

// The full pipeline: per-source detection and selection, co-learning on the
// union, then de-biasing. K = 0 degrades to the target-only fit plus
// self-debias.
TransferResult trans_l2e(const Dataset& target, const std::vector<Dataset>& sources,
                         const TransferConfig& cfg,
                         const std::vector<std::string>& source_ids = {});

}  // namespace transl2e
