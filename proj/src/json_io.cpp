#include "transl2e/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace transl2e {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + it.key() +
                                  "'");
    }
  }
}

json vec_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::vector<double> number_or_array(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(e.get<double>());
    return out;
  }
  throw std::invalid_argument(std::string("config: '") + key +
                              "' must be a number or an array");
}

}  // namespace

nlohmann::json to_json(const FitResult& fit) {
  json j;
  j["beta"] = vec_to_json(fit.beta);
  j["tau"] = fit.tau;
  j["weights"] = vec_to_json(fit.weights);
  j["objective_trace"] = fit.objective_trace;
  j["lambda_used"] = fit.lambda_used;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["tau_at_boundary"] = fit.tau_at_boundary;
  return j;
}

nlohmann::json to_json(const TransferResult& res) {
  json j;
  j["beta_final"] = vec_to_json(res.beta_final);
  j["beta_colearn"] = vec_to_json(res.beta_colearn);
  j["delta"] = vec_to_json(res.delta);
  j["tau_colearn"] = res.tau_colearn;
  j["lambda"] = res.lambda;
  j["mu"] = res.mu;
  json sources = json::array();
  for (std::size_t k = 0; k < res.per_source.size(); ++k) {
    const SourceDetection& det = res.per_source[k];
    json s;
    s["id"] = res.source_ids[k];
    s["lambda_k"] = det.lambda_k;
    s["hellinger"] = det.report.hellinger;
    s["kept_count"] = det.report.kept_count;
    s["kept_proportion"] = det.report.kept_proportion;
    s["kept_labels"] = det.selected.labels;
    sources.push_back(std::move(s));
  }
  j["per_source"] = std::move(sources);
  return j;
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
  check_keys(j,
             {"n0", "nk", "p", "K", "sigma_shift", "tau0", "nu", "r0", "rk",
              "shift_support", "sparse_support", "ar_rho", "seed"},
             "sim config");
  SimConfig cfg;
  if (j.contains("n0")) cfg.n0 = j.at("n0").get<int>();
  if (j.contains("nk")) cfg.nk = j.at("nk").get<int>();
  if (j.contains("p")) cfg.p = j.at("p").get<int>();
  if (j.contains("K")) cfg.K = j.at("K").get<int>();
  if (j.contains("sigma_shift")) cfg.sigma_shift = number_or_array(j, "sigma_shift");
  if (j.contains("tau0")) cfg.tau0 = j.at("tau0").get<double>();
  if (j.contains("nu")) cfg.nu = number_or_array(j, "nu");
  if (j.contains("r0")) cfg.r0 = j.at("r0").get<double>();
  if (j.contains("rk")) cfg.rk = j.at("rk").get<double>();
  if (j.contains("shift_support")) cfg.shift_support = j.at("shift_support").get<int>();
  if (j.contains("sparse_support")) cfg.sparse_support = j.at("sparse_support").get<int>();
  if (j.contains("ar_rho")) cfg.ar_rho = j.at("ar_rho").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

ExperimentRun experiment_run_from_json(const nlohmann::json& j) {
  check_keys(j,
             {"experiment", "grid", "replicates", "methods", "ablation_variants",
              "sim", "seed"},
             "experiment config");
  ExperimentRun run;
  run.experiment.experiment =
      experiment_kind_from_string(j.at("experiment").get<std::string>());
  if (j.contains("grid")) {
    run.experiment.grid.clear();
    for (const auto& v : j.at("grid")) run.experiment.grid.push_back(v.get<double>());
  }
  if (j.contains("replicates")) {
    run.experiment.replicates = j.at("replicates").get<int>();
  }
  if (j.contains("methods")) {
    run.experiment.methods.clear();
    for (const auto& v : j.at("methods")) {
      run.experiment.methods.push_back(method_from_string(v.get<std::string>()));
    }
  }
  if (j.contains("ablation_variants")) {
    run.experiment.ablation_variants.clear();
    for (const auto& v : j.at("ablation_variants")) {
      run.experiment.ablation_variants.push_back(
          ablation_variant_from_string(v.get<std::string>()));
    }
  }
  if (j.contains("sim")) run.sim = sim_config_from_json(j.at("sim"));
  if (j.contains("seed")) run.seed = j.at("seed").get<std::uint64_t>();
  return run;
}

nlohmann::json to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["argv"] = m.argv;
  j["config_digest"] = m.config_digest;
  j["master_seed"] = m.master_seed;
  j["version"] = m.version;
  j["wall_clock_ms"] = m.wall_clock_ms;
  j["outputs"] = m.outputs;
  return j;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_json(m).dump(2) << '\n';
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace transl2e
