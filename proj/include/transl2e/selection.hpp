#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "transl2e/dataset.hpp"

namespace transl2e {

struct SelectionConfig {
  double epsilon = 1e-8;  // guards the density ratio against division by zero
  bool clip_p = true;     // clip p_j into [0,1] so it is a genuine probability
  std::uint64_t seed = 0;
};

struct ImportanceResult {
  Eigen::VectorXd p;      // post-clip when clip_p is set
  Eigen::VectorXd p_raw;  // pre-clip values, kept for diagnostics
  double hellinger = 0.0;
};

// Pseudo-importance weight of each source case:
//   p_j = w_j * f0(w_j) / (fk(w_j) + epsilon) * exp(-sqrt(h))
// where f0, fk are KDEs of the target and source case weights and h is their
// Hellinger distance.
ImportanceResult importance_weights(const Eigen::VectorXd& w_target,
                                    const Eigen::VectorXd& w_source,
                                    const SelectionConfig& cfg);

struct SelectionReport {
  Eigen::VectorXd p;
  Eigen::VectorXd p_raw;
  std::vector<char> kept;
  double hellinger = std::numeric_limits<double>::quiet_NaN();
  int kept_count = 0;
  double kept_proportion = 0.0;
  Eigen::VectorXd uniforms;  // retained for reproducibility audits
};

struct Selection {
  SelectionReport report;
  Dataset selected;  // original row order and labels; may be empty
};

// Accept-reject pass over the source rows: keep row j iff u_j < p_j with
// u_j ~ Unif[0,1) drawn in row order from the seeded stream. An empty
// selection is a legal outcome and marks the cohort as non-transferable.
Selection select_source(const Dataset& source, const Eigen::VectorXd& p,
                        std::uint64_t seed);

}  // namespace transl2e
