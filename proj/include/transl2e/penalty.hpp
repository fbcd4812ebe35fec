#pragma once

#include <Eigen/Dense>
#include <vector>

namespace transl2e {

enum class PenaltyKind { none, lasso, group_lasso };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::none;
  double lambda = 0.0;
  // 0-based column indices; required for group_lasso, where the groups must
  // partition {0, ..., p-1}
  std::vector<std::vector<int>> groups;

  void validate(int p) const;
  // lambda * (||beta||_1, sum_g ||beta_g||_2, or 0)
  double value(const Eigen::VectorXd& beta) const;
};

// componentwise soft threshold: sign(v_j) max(|v_j| - threshold, 0)
Eigen::VectorXd prox_lasso(const Eigen::VectorXd& v, double threshold);

// per group g: v_g max(1 - threshold / ||v_g||_2, 0)
Eigen::VectorXd prox_group_lasso(const Eigen::VectorXd& v, double threshold,
                                 const std::vector<std::vector<int>>& groups);

}  // namespace transl2e
