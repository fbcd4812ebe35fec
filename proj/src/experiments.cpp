#include "transl2e/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "transl2e/cross_validation.hpp"
#include "transl2e/density.hpp"
#include "transl2e/parallel.hpp"
#include "transl2e/rng.hpp"

namespace transl2e {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

SimConfig apply_grid_value(const SimConfig& base, ExperimentKind kind, double value) {
  SimConfig sc = base;
  switch (kind) {
    case ExperimentKind::outlier_prop:
      sc.rk = value;
      break;
    case ExperimentKind::model_shift:
      sc.sigma_shift = {value};
      break;
    case ExperimentKind::precision_shift:
      sc.nu = {value};
      break;
    case ExperimentKind::dimension:
      sc.p = static_cast<int>(std::llround(value));
      break;
    case ExperimentKind::source_count:
      sc.K = static_cast<int>(std::llround(value));
      break;
    case ExperimentKind::selection_ablation:
      // the single-source selection study: outliers only in the source
      sc.sigma_shift = {value};
      sc.K = 1;
      sc.nk = 1200;
      sc.r0 = 0.0;
      break;
  }
  return sc;
}

TransferConfig make_transfer_config(std::uint64_t seed) {
  TransferConfig cfg;
  cfg.seed = seed;
  return cfg;
}

// the trans_l2e pipeline with the stated factor removed from p_j; variant
// full reproduces trans_l2e bit for bit (same seed streams)
TransferResult run_ablation_pipeline(const Dataset& target,
                                     const std::vector<Dataset>& sources,
                                     const TransferConfig& cfg, AblationVariant v) {
  TransferResult res;
  res.source_ids.resize(sources.size());
  res.per_source.resize(sources.size());
  for (std::size_t k = 0; k < sources.size(); ++k) {
    res.source_ids[k] = std::to_string(k);
  }

  for (std::size_t k = 0; k < sources.size(); ++k) {
    const std::string& id = res.source_ids[k];
    const Dataset merged = vstack(target, sources[k]);
    PenaltySpec pen;
    pen.kind = cfg.penalty_kind;
    pen.groups = cfg.groups;
    SourceDetection det;
    det.fit = fit_l2e_cv(merged, pen, cfg.lambda_grid, cfg.folds, cfg.solver,
                         stage_seed(cfg.seed, "src/" + id + "/cv"));
    det.lambda_k = det.fit.lambda_used;

    const Eigen::VectorXd w0 = det.fit.weights.head(target.n_rows());
    const Eigen::VectorXd wk = det.fit.weights.tail(sources[k].n_rows());
    const DensityEstimate f0 =
        kde_fit(std::vector<double>(w0.data(), w0.data() + w0.size()));
    const DensityEstimate fk =
        kde_fit(std::vector<double>(wk.data(), wk.data() + wk.size()));
    const double h = hellinger(f0, fk).distance;
    const double modulation =
        v == AblationVariant::no_hellinger ? 1.0 : std::exp(-std::sqrt(h));

    Eigen::VectorXd p(wk.size());
    for (Eigen::Index j = 0; j < wk.size(); ++j) {
      const double base = v == AblationVariant::no_weight ? 1.0 : wk[j];
      const double ratio =
          v == AblationVariant::no_ratio
              ? 1.0
              : kde_eval(f0, wk[j]) / (kde_eval(fk, wk[j]) + cfg.selection.epsilon);
      const double pj = base * ratio * modulation;
      p[j] = cfg.selection.clip_p ? std::clamp(pj, 0.0, 1.0) : pj;
    }
    Selection sel =
        select_source(sources[k], p, stage_seed(cfg.seed, "src/" + id + "/select"));
    sel.report.hellinger = h;
    det.report = std::move(sel.report);
    det.selected = std::move(sel.selected);
    res.per_source[k] = std::move(det);
  }

  std::vector<Dataset> selected;
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

double total_kept(const TransferResult& res, const std::vector<Dataset>& sources) {
  if (sources.empty()) return kNaN;
  double kept = 0.0, total = 0.0;
  for (std::size_t k = 0; k < res.per_source.size(); ++k) {
    kept += res.per_source[k].report.kept_count;
    total += static_cast<double>(sources[k].n_rows());
  }
  return total > 0.0 ? kept / total : kNaN;
}

struct CellData {
  Dataset target;
  Eigen::VectorXd beta_true;
  std::vector<Dataset> sources;
};

CellData generate_cell(const SimConfig& sc, std::uint64_t data_seed) {
  CellData cell;
  auto [target, beta] = gen_target(sc, derive_seed(data_seed, "target"));
  cell.target = std::move(target);
  cell.beta_true = std::move(beta);
  cell.sources.reserve(static_cast<std::size_t>(sc.K));
  for (int k = 0; k < sc.K; ++k) {
    auto [src, beta_k] =
        gen_source(sc, k, cell.beta_true, derive_seed(data_seed, "source/" + std::to_string(k)));
    cell.sources.push_back(std::move(src));
  }
  return cell;
}

std::string csv_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::outlier_prop: return "outlier_prop";
    case ExperimentKind::model_shift: return "model_shift";
    case ExperimentKind::precision_shift: return "precision_shift";
    case ExperimentKind::dimension: return "dimension";
    case ExperimentKind::source_count: return "source_count";
    case ExperimentKind::selection_ablation: return "selection_ablation";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::target_lasso: return "target_lasso";
    case Method::target_l2e: return "target_l2e";
    case Method::pooled_l2e: return "pooled_l2e";
    case Method::trans_l2e: return "trans_l2e";
  }
  return "?";
}

std::string to_string(AblationVariant v) {
  switch (v) {
    case AblationVariant::full: return "full";
    case AblationVariant::no_weight: return "no_weight";
    case AblationVariant::no_ratio: return "no_ratio";
    case AblationVariant::no_hellinger: return "no_hellinger";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (ExperimentKind k :
       {ExperimentKind::outlier_prop, ExperimentKind::model_shift,
        ExperimentKind::precision_shift, ExperimentKind::dimension,
        ExperimentKind::source_count, ExperimentKind::selection_ablation}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown experiment: " + s);
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::target_lasso, Method::target_l2e, Method::pooled_l2e,
                   Method::trans_l2e}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown method: " + s);
}

AblationVariant ablation_variant_from_string(const std::string& s) {
  for (AblationVariant v : {AblationVariant::full, AblationVariant::no_weight,
                            AblationVariant::no_ratio, AblationVariant::no_hellinger}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown ablation variant: " + s);
}

std::vector<double> stock_grid(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::outlier_prop: return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    case ExperimentKind::model_shift: return {0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
    case ExperimentKind::precision_shift: return {0.2, 0.5, 1.0, 2.0, 4.0};
    case ExperimentKind::dimension: return {50.0, 250.0, 500.0};
    case ExperimentKind::source_count: return {1.0, 3.0, 5.0, 7.0, 9.0};
    case ExperimentKind::selection_ablation: return {0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
  }
  return {};
}

ResultsTable run_experiment(const ExperimentConfig& ecfg, const SimConfig& base,
                            std::uint64_t seed) {
  if (ecfg.replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
  const std::vector<double> grid =
      ecfg.grid.empty() ? stock_grid(ecfg.experiment) : ecfg.grid;
  if (grid.empty()) throw std::invalid_argument("experiment: empty grid");
  const std::string exp_name = to_string(ecfg.experiment);
  const bool ablation = ecfg.experiment == ExperimentKind::selection_ablation;

  // method labels in emission order
  std::vector<std::string> labels;
  if (ablation) {
    for (AblationVariant v : ecfg.ablation_variants) {
      labels.push_back("trans_l2e_" + to_string(v));
    }
    for (Method m : ecfg.methods) {
      if (m != Method::trans_l2e) labels.push_back(to_string(m));
    }
  } else {
    for (Method m : ecfg.methods) labels.push_back(to_string(m));
  }
  if (labels.empty()) throw std::invalid_argument("experiment: nothing to run");

  const std::size_t cells = grid.size() * static_cast<std::size_t>(ecfg.replicates);
  std::vector<std::vector<ResultRow>> per_cell(cells);

  parallel_for(cells, [&](std::size_t c) {
    const std::size_t gi = c / static_cast<std::size_t>(ecfg.replicates);
    const int rep = static_cast<int>(c % static_cast<std::size_t>(ecfg.replicates));
    const SimConfig sc = apply_grid_value(base, ecfg.experiment, grid[gi]);
    const std::string cell_tag =
        exp_name + "/" + std::to_string(gi) + "/" + std::to_string(rep);
    const CellData cell = generate_cell(sc, derive_seed(seed, "data/" + cell_tag));

    auto run_one = [&](const std::string& label) {
      const std::uint64_t mseed = derive_seed(seed, "method/" + cell_tag + "/" + label);
      ResultRow row;
      row.experiment = exp_name;
      row.grid_value = grid[gi];
      row.replicate = rep;
      row.method = label;
      row.kept_proportion = kNaN;

      const auto t0 = std::chrono::steady_clock::now();
      Eigen::VectorXd beta_hat;
      if (label == "target_lasso") {
        beta_hat = ls_lasso_cv(cell.target, default_lambda_grid(), 5,
                               derive_seed(mseed, "cv"));
      } else if (label == "target_l2e") {
        PenaltySpec pen;
        pen.kind = PenaltyKind::lasso;
        beta_hat = fit_l2e_cv(cell.target, pen, default_lambda_grid(), 5,
                              SolverOptions{}, stage_seed(mseed, "colearn/cv"))
                       .beta;
      } else if (label == "pooled_l2e") {
        std::vector<const Dataset*> parts{&cell.target};
        for (const Dataset& s : cell.sources) parts.push_back(&s);
        const Dataset pooled = parts.size() == 1 ? cell.target : vstack(parts);
        PenaltySpec pen;
        pen.kind = PenaltyKind::lasso;
        beta_hat = fit_l2e_cv(pooled, pen, default_lambda_grid(), 5, SolverOptions{},
                              stage_seed(mseed, "colearn/cv"))
                       .beta;
      } else if (label == "trans_l2e") {
        const TransferResult res =
            trans_l2e(cell.target, cell.sources, make_transfer_config(mseed));
        beta_hat = res.beta_final;
        row.kept_proportion = total_kept(res, cell.sources);
      } else {  // trans_l2e_<variant>
        const AblationVariant v =
            ablation_variant_from_string(label.substr(std::string("trans_l2e_").size()));
        const TransferResult res = run_ablation_pipeline(
            cell.target, cell.sources, make_transfer_config(mseed), v);
        beta_hat = res.beta_final;
        row.kept_proportion = total_kept(res, cell.sources);
      }
      const auto t1 = std::chrono::steady_clock::now();

      row.rel_err = rel_err(beta_hat, cell.beta_true);
      row.f1 = f1_score(beta_hat, cell.beta_true).f1;
      row.runtime_ms =
          std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
              .count();
      per_cell[c].push_back(std::move(row));
    };

    for (const std::string& label : labels) run_one(label);
  });

  ResultsTable table;
  table.rows.reserve(cells * labels.size());
  for (auto& rows : per_cell) {
    for (auto& r : rows) table.rows.push_back(std::move(r));
  }
  return table;
}

std::vector<SummaryRow> summarize(const ResultsTable& table) {
  // group rows by (experiment, grid_value, method) in first-appearance order
  std::vector<SummaryRow> out;
  std::vector<std::vector<const ResultRow*>> groups;
  std::vector<std::string> keys;
  for (const ResultRow& r : table.rows) {
    const std::string key =
        r.experiment + "\x1f" + csv_double(r.grid_value) + "\x1f" + r.method;
    std::size_t gi = 0;
    for (; gi < keys.size(); ++gi) {
      if (keys[gi] == key) break;
    }
    if (gi == keys.size()) {
      keys.push_back(key);
      groups.emplace_back();
    }
    groups[gi].push_back(&r);
  }
  for (const auto& g : groups) {
    SummaryRow s;
    s.experiment = g.front()->experiment;
    s.grid_value = g.front()->grid_value;
    s.method = g.front()->method;
    std::vector<double> re, f1, kept;
    for (const ResultRow* r : g) {
      re.push_back(r->rel_err);
      f1.push_back(r->f1);
      if (!std::isnan(r->kept_proportion)) kept.push_back(r->kept_proportion);
    }
    s.rel_err_median = quantile(re, 0.5);
    s.rel_err_q25 = quantile(re, 0.25);
    s.rel_err_q75 = quantile(re, 0.75);
    s.f1_median = quantile(f1, 0.5);
    s.f1_q25 = quantile(f1, 0.25);
    s.f1_q75 = quantile(f1, 0.75);
    s.kept_median = kept.empty() ? kNaN : quantile(kept, 0.5);
    s.n = static_cast<int>(g.size());
    out.push_back(std::move(s));
  }
  return out;
}

void write_results_csv(const std::string& path, const ResultsTable& table) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "experiment,grid_value,replicate,method,rel_err,f1,kept_proportion\n";
  for (const ResultRow& r : table.rows) {
    f << r.experiment << ',' << csv_double(r.grid_value) << ',' << r.replicate << ','
      << r.method << ',' << csv_double(r.rel_err) << ',' << csv_double(r.f1) << ','
      << csv_double(r.kept_proportion) << '\n';
  }
}

void write_timings_csv(const std::string& path, const ResultsTable& table) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "experiment,grid_value,replicate,method,runtime_ms\n";
  for (const ResultRow& r : table.rows) {
    f << r.experiment << ',' << csv_double(r.grid_value) << ',' << r.replicate << ','
      << r.method << ',' << csv_double(r.runtime_ms) << '\n';
  }
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "experiment,grid_value,method,rel_err_median,rel_err_q25,rel_err_q75,"
       "f1_median,f1_q25,f1_q75,kept_median,n\n";
  for (const SummaryRow& s : rows) {
    f << s.experiment << ',' << csv_double(s.grid_value) << ',' << s.method << ','
      << csv_double(s.rel_err_median) << ',' << csv_double(s.rel_err_q25) << ','
      << csv_double(s.rel_err_q75) << ',' << csv_double(s.f1_median) << ','
      << csv_double(s.f1_q25) << ',' << csv_double(s.f1_q75) << ','
      << csv_double(s.kept_median) << ',' << s.n << '\n';
  }
}

ResultsTable read_results_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty results file: " + path);
  ResultsTable table;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (fields.size() != 7) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 7 columns");
    }
    ResultRow r;
    r.experiment = fields[0];
    r.grid_value = std::stod(fields[1]);
    r.replicate = std::stoi(fields[2]);
    r.method = fields[3];
    r.rel_err = fields[4].empty() ? kNaN : std::stod(fields[4]);
    r.f1 = fields[5].empty() ? kNaN : std::stod(fields[5]);
    r.kept_proportion = fields[6].empty() ? kNaN : std::stod(fields[6]);
    r.runtime_ms = kNaN;
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace transl2e
