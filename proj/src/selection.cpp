#include "transl2e/selection.hpp"

#include <cmath>
#include <stdexcept>

#include "transl2e/density.hpp"
#include "transl2e/rng.hpp"

namespace transl2e {

namespace {

void check_weights(const Eigen::VectorXd& w, const char* name) {
  if (w.size() == 0) {
    throw std::invalid_argument(std::string("selection: empty ") + name + " weights");
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    // case weights live in (0,1]; exact zeros are admitted since extreme
    // outliers underflow to 0 and simply get p_j = 0
    if (!(w[i] >= 0.0) || w[i] > 1.0) {
      throw std::invalid_argument(std::string("selection: ") + name +
                                  " weights must lie in [0,1]");
    }
  }
}

}  // namespace

ImportanceResult importance_weights(const Eigen::VectorXd& w_target,
                                    const Eigen::VectorXd& w_source,
                                    const SelectionConfig& cfg) {
  check_weights(w_target, "target");
  check_weights(w_source, "source");
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("selection: epsilon must be positive");
  }

  const DensityEstimate f0 =
      kde_fit(std::vector<double>(w_target.data(), w_target.data() + w_target.size()));
  const DensityEstimate fk =
      kde_fit(std::vector<double>(w_source.data(), w_source.data() + w_source.size()));
  const HellingerResult h = hellinger(f0, fk);
  const double modulation = std::exp(-std::sqrt(h.distance));

  ImportanceResult res;
  res.hellinger = h.distance;
  res.p_raw.resize(w_source.size());
  res.p.resize(w_source.size());
  for (Eigen::Index j = 0; j < w_source.size(); ++j) {
    const double wj = w_source[j];
    const double ratio = kde_eval(f0, wj) / (kde_eval(fk, wj) + cfg.epsilon);
    const double pj = wj * ratio * modulation;
    res.p_raw[j] = pj;
    res.p[j] = cfg.clip_p ? std::clamp(pj, 0.0, 1.0) : pj;
  }
  return res;
}

Selection select_source(const Dataset& source, const Eigen::VectorXd& p,
                        std::uint64_t seed) {
  source.validate();
  if (p.size() != source.n_rows()) {
    throw std::invalid_argument("selection: p length must match the source row count");
  }

  Selection out;
  SelectionReport& rep = out.report;
  rep.p = p;
  rep.p_raw = p;
  rep.uniforms.resize(p.size());
  rep.kept.assign(static_cast<std::size_t>(p.size()), 0);

  Rng rng(seed);
  std::vector<Eigen::Index> kept_rows;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double u = rng.uniform();
    rep.uniforms[j] = u;
    if (u < p[j]) {
      rep.kept[static_cast<std::size_t>(j)] = 1;
      kept_rows.push_back(j);
    }
  }
  rep.kept_count = static_cast<int>(kept_rows.size());
  rep.kept_proportion =
      static_cast<double>(rep.kept_count) / static_cast<double>(p.size());

  out.selected.X.resize(static_cast<Eigen::Index>(kept_rows.size()), source.n_cols());
  out.selected.y.resize(static_cast<Eigen::Index>(kept_rows.size()));
  const bool labeled = !source.labels.empty();
  if (labeled) out.selected.labels.reserve(kept_rows.size());
  for (std::size_t i = 0; i < kept_rows.size(); ++i) {
    out.selected.X.row(static_cast<Eigen::Index>(i)) = source.X.row(kept_rows[i]);
    out.selected.y[static_cast<Eigen::Index>(i)] = source.y[kept_rows[i]];
    if (labeled) {
      out.selected.labels.push_back(source.labels[static_cast<std::size_t>(kept_rows[i])]);
    }
  }
  return out;
}

}  // namespace transl2e
