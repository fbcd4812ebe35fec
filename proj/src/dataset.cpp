#include "transl2e/dataset.hpp"

#include <stdexcept>

namespace transl2e {

void Dataset::validate() const {
  if (X.rows() < 1 || X.cols() < 1) {
    throw std::invalid_argument("dataset: need at least one row and one column");
  }
  if (X.rows() != y.size()) {
    throw std::invalid_argument("dataset: row count of X must equal length of y");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("dataset: all entries must be finite");
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != X.rows()) {
    throw std::invalid_argument("dataset: labels must be empty or one per row");
  }
}

Dataset vstack(const std::vector<const Dataset*>& parts) {
  if (parts.empty()) throw std::invalid_argument("vstack: no parts");
  const Eigen::Index p = parts.front()->n_cols();
  Eigen::Index n = 0;
  bool all_labeled = true;
  for (const Dataset* d : parts) {
    if (d->n_cols() != p) {
      throw std::invalid_argument("vstack: column counts differ");
    }
    n += d->n_rows();
    all_labeled = all_labeled && !d->labels.empty();
  }
  Dataset out;
  out.X.resize(n, p);
  out.y.resize(n);
  if (all_labeled) out.labels.reserve(static_cast<std::size_t>(n));
  Eigen::Index row = 0;
  for (const Dataset* d : parts) {
    out.X.middleRows(row, d->n_rows()) = d->X;
    out.y.segment(row, d->n_rows()) = d->y;
    if (all_labeled) {
      out.labels.insert(out.labels.end(), d->labels.begin(), d->labels.end());
    }
    row += d->n_rows();
  }
  return out;
}

Dataset vstack(const Dataset& a, const Dataset& b) { return vstack({&a, &b}); }

}  // namespace transl2e
