#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "transl2e/simulate.hpp"
#include "transl2e/transfer.hpp"

namespace transl2e {

enum class ExperimentKind {
  outlier_prop,     // source contamination r_k
  model_shift,      // sigma
  precision_shift,  // nu
  dimension,        // p
  source_count,     // K
  selection_ablation  // sigma, single source of 1200 rows, ablated p_j
};

enum class Method { target_lasso, target_l2e, pooled_l2e, trans_l2e };

enum class AblationVariant { full, no_weight, no_ratio, no_hellinger };

std::string to_string(ExperimentKind k);
std::string to_string(Method m);
std::string to_string(AblationVariant v);
ExperimentKind experiment_kind_from_string(const std::string& s);
Method method_from_string(const std::string& s);
AblationVariant ablation_variant_from_string(const std::string& s);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::model_shift;
  std::vector<double> grid;  // empty = the experiment's stock grid
  int replicates = 20;       // desk scale; 50 reproduces the full studies
  std::vector<Method> methods{Method::target_lasso, Method::target_l2e,
                              Method::pooled_l2e, Method::trans_l2e};
  std::vector<AblationVariant> ablation_variants{
      AblationVariant::full, AblationVariant::no_weight, AblationVariant::no_ratio,
      AblationVariant::no_hellinger};
};

std::vector<double> stock_grid(ExperimentKind k);

struct ResultRow {
  std::string experiment;
  double grid_value = 0.0;
  int replicate = 0;
  std::string method;
  double rel_err = 0.0;
  double f1 = 0.0;
  double kept_proportion = 0.0;  // NaN for methods without a selection step
  double runtime_ms = 0.0;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
};

// Runs grid x replicate x method. All methods at one (grid point, replicate)
// cell see the same generated datasets; every cell draws from its own derived
// seed, so rows do not depend on evaluation order or thread count.
ResultsTable run_experiment(const ExperimentConfig& ecfg, const SimConfig& base,
                            std::uint64_t seed);

struct SummaryRow {
  std::string experiment;
  double grid_value = 0.0;
  std::string method;
  double rel_err_median = 0.0, rel_err_q25 = 0.0, rel_err_q75 = 0.0;
  double f1_median = 0.0, f1_q25 = 0.0, f1_q75 = 0.0;
  double kept_median = 0.0;
  int n = 0;
};

std::vector<SummaryRow> summarize(const ResultsTable& table);

// results.csv holds the deterministic columns; runtimes go to a separate
// timings file so results.csv is byte-identical across reruns.
void write_results_csv(const std::string& path, const ResultsTable& table);
void write_timings_csv(const std::string& path, const ResultsTable& table);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
ResultsTable read_results_csv(const std::string& path);

}  // namespace transl2e
