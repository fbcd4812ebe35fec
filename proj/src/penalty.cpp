#include "transl2e/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace transl2e {

namespace {

void check_partition(const std::vector<std::vector<int>>& groups, int p) {
  std::vector<int> seen(static_cast<std::size_t>(p), 0);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("penalty: empty group");
    for (int j : g) {
      if (j < 0 || j >= p) throw std::invalid_argument("penalty: group index out of range");
      if (seen[static_cast<std::size_t>(j)]++) {
        throw std::invalid_argument("penalty: groups must be disjoint");
      }
    }
  }
  for (int j = 0; j < p; ++j) {
    if (!seen[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("penalty: groups must cover every column");
    }
  }
}

}  // namespace

void PenaltySpec::validate(int p) const {
  if (lambda < 0.0) throw std::invalid_argument("penalty: lambda must be nonnegative");
  if (kind == PenaltyKind::group_lasso) {
    if (groups.empty()) throw std::invalid_argument("penalty: group_lasso requires groups");
    check_partition(groups, p);
  }
}

double PenaltySpec::value(const Eigen::VectorXd& beta) const {
  switch (kind) {
    case PenaltyKind::none:
      return 0.0;
    case PenaltyKind::lasso:
      return lambda * beta.lpNorm<1>();
    case PenaltyKind::group_lasso: {
      double s = 0.0;
      for (const auto& g : groups) {
        double sq = 0.0;
        for (int j : g) sq += beta[j] * beta[j];
        s += std::sqrt(sq);
      }
      return lambda * s;
    }
  }
  return 0.0;
}

Eigen::VectorXd prox_lasso(const Eigen::VectorXd& v, double threshold) {
  if (threshold < 0.0) throw std::domain_error("prox_lasso: negative threshold");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double a = std::abs(v[j]) - threshold;
    out[j] = a > 0.0 ? (v[j] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

Eigen::VectorXd prox_group_lasso(const Eigen::VectorXd& v, double threshold,
                                 const std::vector<std::vector<int>>& groups) {
  if (threshold < 0.0) throw std::domain_error("prox_group_lasso: negative threshold");
  check_partition(groups, static_cast<int>(v.size()));
  Eigen::VectorXd out(v.size());
  for (const auto& g : groups) {
    double sq = 0.0;
    for (int j : g) sq += v[j] * v[j];
    const double norm = std::sqrt(sq);
    const double scale = norm > threshold ? 1.0 - threshold / norm : 0.0;
    for (int j : g) out[j] = scale * v[j];
  }
  return out;
}

}  // namespace transl2e
