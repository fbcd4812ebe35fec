#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace transl2e {

// One cohort: design matrix plus responses. Row labels are optional and are
// carried through stacking and selection so kept rows can be traced back to
// their origin.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> labels;  // empty, or one label per row

  Eigen::Index n_rows() const { return X.rows(); }
  Eigen::Index n_cols() const { return X.cols(); }

  // throws std::invalid_argument on shape mismatch or non-finite entries
  void validate() const;
};

// Row-wise stack; parts must share the column count. Labels are concatenated
// when every part carries them, otherwise dropped.
Dataset vstack(const std::vector<const Dataset*>& parts);
Dataset vstack(const Dataset& a, const Dataset& b);

}  // namespace transl2e
