#include "transl2e/transfer.hpp"

#include <stdexcept>

#include "transl2e/l2e.hpp"
#include "transl2e/parallel.hpp"
#include "transl2e/rng.hpp"

namespace transl2e {

namespace {

PenaltySpec step_penalty(const TransferConfig& cfg) {
  PenaltySpec pen;
  pen.kind = cfg.penalty_kind;
  pen.groups = cfg.groups;
  return pen;
}

}  // namespace

std::uint64_t stage_seed(std::uint64_t master, const std::string& label) {
  return derive_seed(master, label);
}

SourceDetection detect_and_select(const Dataset& target, const Dataset& source,
                                  const TransferConfig& cfg,
                                  const std::string& source_id) {
  target.validate();
  source.validate();
  if (target.n_cols() != source.n_cols()) {
    throw std::invalid_argument("transfer: target and source column counts differ");
  }

  const Dataset merged = vstack(target, source);
  const std::uint64_t cv_seed = stage_seed(cfg.seed, "src/" + source_id + "/cv");

  SourceDetection det;
  det.fit = fit_l2e_cv(merged, step_penalty(cfg), cfg.lambda_grid, cfg.folds,
                       cfg.solver, cv_seed);
  det.lambda_k = det.fit.lambda_used;

  const Eigen::Index n0 = target.n_rows();
  const Eigen::VectorXd w_target = det.fit.weights.head(n0);
  const Eigen::VectorXd w_source = det.fit.weights.tail(source.n_rows());

  const ImportanceResult imp = importance_weights(w_target, w_source, cfg.selection);
  Selection sel = select_source(source, imp.p,
                                stage_seed(cfg.seed, "src/" + source_id + "/select"));
  sel.report.hellinger = imp.hellinger;
  sel.report.p_raw = imp.p_raw;

  det.report = std::move(sel.report);
  det.selected = std::move(sel.selected);
  return det;
}

FitResult co_learn(const Dataset& target, const std::vector<Dataset>& selected,
                   const TransferConfig& cfg) {
  std::vector<const Dataset*> parts{&target};
  for (const Dataset& d : selected) {
    if (d.n_rows() > 0) parts.push_back(&d);
  }
  const Dataset merged = parts.size() == 1 ? target : vstack(parts);
  return fit_l2e_cv(merged, step_penalty(cfg), cfg.lambda_grid, cfg.folds,
                    cfg.solver, stage_seed(cfg.seed, "colearn/cv"));
}

DebiasResult debias(const Dataset& target, const Eigen::VectorXd& beta_colearn,
                    const TransferConfig& cfg) {
  target.validate();
  if (beta_colearn.size() != target.n_cols()) {
    throw std::invalid_argument("transfer: beta_colearn has wrong length");
  }
  Dataset resid = target;
  resid.y = target.y - target.X * beta_colearn;

  PenaltySpec pen;
  pen.kind = PenaltyKind::lasso;
  const FitResult fit = fit_l2e_cv(resid, pen, cfg.mu_grid, cfg.folds, cfg.solver,
                                   stage_seed(cfg.seed, "debias/cv"));
  DebiasResult out;
  out.delta = fit.beta;
  out.beta_final = beta_colearn + fit.beta;
  out.mu = fit.lambda_used;
  return out;
}

TransferResult trans_l2e(const Dataset& target, const std::vector<Dataset>& sources,
                         const TransferConfig& cfg,
                         const std::vector<std::string>& source_ids) {
  target.validate();
  if (!source_ids.empty() && source_ids.size() != sources.size()) {
    throw std::invalid_argument("transfer: source_ids must match the source count");
  }

  TransferResult res;
  res.source_ids.resize(sources.size());
  for (std::size_t k = 0; k < sources.size(); ++k) {
    res.source_ids[k] = source_ids.empty() ? std::to_string(k) : source_ids[k];
  }

  res.per_source.resize(sources.size());
  parallel_for(sources.size(), [&](std::size_t k) {
    res.per_source[k] = detect_and_select(target, sources[k], cfg, res.source_ids[k]);
  });

  std::vector<Dataset> selected;
  selected.reserve(sources.size());
  res.lambda_k.reserve(sources.size());
  for (const SourceDetection& det : res.per_source) {
    selected.push_back(det.selected);
    res.lambda_k.push_back(det.lambda_k);
  }

  const FitResult colearn = co_learn(target, selected, cfg);
  res.beta_colearn = colearn.beta;
  res.tau_colearn = colearn.tau;
  res.lambda = colearn.lambda_used;

  const DebiasResult deb = debias(target, res.beta_colearn, cfg);
  res.delta = deb.delta;
  res.beta_final = deb.beta_final;
  res.mu = deb.mu;
  return res;
}

}  // namespace transl2e
