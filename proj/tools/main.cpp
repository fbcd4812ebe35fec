#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "transl2e/csv.hpp"
#include "transl2e/cross_validation.hpp"
#include "transl2e/experiments.hpp"
#include "transl2e/json_io.hpp"
#include "transl2e/parallel.hpp"
#include "transl2e/plot.hpp"
#include "transl2e/simulate.hpp"
#include "transl2e/transfer.hpp"

namespace fs = std::filesystem;
using namespace transl2e;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// "1-5,6-10,11" -> 0-based groups; 1-based inclusive ranges must tile 1..p
std::vector<std::vector<int>> parse_groups(const std::string& spec) {
  std::vector<std::vector<int>> groups;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) throw std::invalid_argument("groups: empty range");
    int lo = 0, hi = 0;
    const auto dash = token.find('-');
    if (dash == std::string::npos) {
      lo = hi = std::stoi(token);
    } else {
      lo = std::stoi(token.substr(0, dash));
      hi = std::stoi(token.substr(dash + 1));
    }
    if (lo < 1 || hi < lo) throw std::invalid_argument("groups: bad range '" + token + "'");
    std::vector<int> g;
    for (int j = lo; j <= hi; ++j) g.push_back(j - 1);
    groups.push_back(std::move(g));
  }
  if (groups.empty()) throw std::invalid_argument("groups: empty spec");
  return groups;
}

PenaltyKind parse_penalty(const std::string& s) {
  if (s == "lasso") return PenaltyKind::lasso;
  if (s == "group-lasso") return PenaltyKind::group_lasso;
  if (s == "none") return PenaltyKind::none;
  throw std::invalid_argument("unknown penalty '" + s + "'");
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
}

struct ManifestTimer {
  RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  ManifestTimer(const std::string& command, int argc, char** argv,
                std::uint64_t seed, const std::string& config_bytes) {
    manifest.command = command;
    for (int i = 0; i < argc; ++i) manifest.argv.emplace_back(argv[i]);
    manifest.master_seed = seed;
    manifest.version = TRANSL2E_VERSION;
    manifest.config_digest = fnv1a64_hex(config_bytes);
  }

  void finish(const std::string& path, std::vector<std::string> outputs) {
    manifest.outputs = std::move(outputs);
    manifest.wall_clock_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
            std::chrono::steady_clock::now() - start)
            .count();
    write_manifest(path, manifest);
  }
};

struct FitArgs {
  std::string data, response, out, penalty = "lasso", groups;
  double lambda = -1.0;
  bool use_cv = false, standardize = false, no_header = false;
  std::uint64_t seed = 0;
};

struct TransferArgs {
  std::string target, response, out, penalty = "lasso";
  std::vector<std::string> sources;
  bool standardize = false, no_header = false;
  std::uint64_t seed = 0;
};

int run_fit(const FitArgs& a, int argc, char** argv) {
  CsvSchema schema;
  schema.response = a.response;
  schema.has_header = !a.no_header;
  schema.standardize = a.standardize;
  const Dataset data = load_dataset(a.data, schema);

  PenaltySpec pen;
  pen.kind = parse_penalty(a.penalty);
  if (pen.kind == PenaltyKind::group_lasso) {
    pen.groups = parse_groups(a.groups);
  } else if (!a.groups.empty()) {
    throw std::invalid_argument("--groups requires --penalty group-lasso");
  }

  std::ostringstream cfg;
  cfg << "fit data=" << a.data << " response=" << a.response << " penalty=" << a.penalty
      << " lambda=" << a.lambda << " cv=" << a.use_cv << " groups=" << a.groups
      << " standardize=" << a.standardize << " header=" << !a.no_header
      << " seed=" << a.seed;
  ManifestTimer mt("fit", argc, argv, a.seed, cfg.str());

  FitResult fit;
  if (pen.kind == PenaltyKind::none) {
    fit = fit_structured_l2e(data, pen, SolverOptions{}, a.seed);
  } else if (a.lambda >= 0.0) {
    pen.lambda = a.lambda;
    fit = fit_structured_l2e(data, pen, SolverOptions{}, a.seed);
  } else {
    // CV is the default when no lambda is given
    fit = fit_l2e_cv(data, pen, default_lambda_grid(), 5, SolverOptions{}, a.seed);
  }
  write_json_file(a.out, to_json(fit));
  mt.finish(a.out + ".manifest.json", {a.out});
  return 0;
}

int run_transfer(const TransferArgs& a, int argc, char** argv) {
  CsvSchema schema;
  schema.response = a.response;
  schema.has_header = !a.no_header;
  schema.standardize = a.standardize;
  const Dataset target = load_dataset(a.target, schema);
  std::vector<Dataset> sources;
  for (const std::string& path : a.sources) sources.push_back(load_dataset(path, schema));

  TransferConfig cfg;
  cfg.penalty_kind = parse_penalty(a.penalty);
  cfg.seed = a.seed;

  std::ostringstream cfg_str;
  cfg_str << "transfer target=" << a.target << " response=" << a.response
          << " penalty=" << a.penalty << " standardize=" << a.standardize
          << " header=" << !a.no_header << " seed=" << a.seed;
  for (const std::string& s : a.sources) cfg_str << " source=" << s;
  ManifestTimer mt("transfer", argc, argv, a.seed, cfg_str.str());

  const TransferResult res = trans_l2e(target, sources, cfg);
  write_json_file(a.out, to_json(res));
  mt.finish(a.out + ".manifest.json", {a.out});
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_dir, int argc,
                 char** argv) {
  const std::string bytes = read_file(config_path);
  const SimConfig cfg = sim_config_from_json(nlohmann::json::parse(bytes));
  fs::create_directories(out_dir);
  ManifestTimer mt("simulate", argc, argv, cfg.seed, bytes);

  std::vector<std::string> outputs;
  auto [target, beta_t] = gen_target(cfg, derive_seed(cfg.seed, "target"));
  const std::string target_path = out_dir + "/target.csv";
  write_dataset_csv(target_path, target);
  outputs.push_back(target_path);

  nlohmann::json truth;
  truth["beta_true_target"] = std::vector<double>(beta_t.data(), beta_t.data() + beta_t.size());
  truth["beta_true_sources"] = nlohmann::json::array();
  for (int k = 0; k < cfg.K; ++k) {
    auto [src, beta_k] =
        gen_source(cfg, k, beta_t, derive_seed(cfg.seed, "source/" + std::to_string(k)));
    const std::string src_path = out_dir + "/source_" + std::to_string(k + 1) + ".csv";
    write_dataset_csv(src_path, src);
    outputs.push_back(src_path);
    truth["beta_true_sources"].push_back(
        std::vector<double>(beta_k.data(), beta_k.data() + beta_k.size()));
  }
  truth["seed"] = cfg.seed;
  const std::string truth_path = out_dir + "/truth.json";
  write_json_file(truth_path, truth);
  outputs.push_back(truth_path);

  mt.finish(out_dir + "/manifest.json", outputs);
  return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_dir,
                       int replicates_override, int argc, char** argv) {
  const std::string bytes = read_file(config_path);
  ExperimentRun run = experiment_run_from_json(nlohmann::json::parse(bytes));
  if (replicates_override > 0) run.experiment.replicates = replicates_override;
  fs::create_directories(out_dir);
  ManifestTimer mt("experiment", argc, argv, run.seed, bytes);

  const ResultsTable table = run_experiment(run.experiment, run.sim, run.seed);
  const std::string results_path = out_dir + "/results.csv";
  const std::string summary_path = out_dir + "/summary.csv";
  const std::string timings_path = out_dir + "/timings.csv";
  write_results_csv(results_path, table);
  write_summary_csv(summary_path, summarize(table));
  write_timings_csv(timings_path, table);

  mt.finish(out_dir + "/manifest.json", {results_path, summary_path, timings_path});
  return 0;
}

int run_plot(const std::string& results_path, const std::string& out_dir, int argc,
             char** argv) {
  const ResultsTable table = read_results_csv(results_path);
  fs::create_directories(out_dir);
  ManifestTimer mt("plot", argc, argv, 0, read_file(results_path));
  const std::vector<std::string> outputs = write_experiment_svgs(table, out_dir);
  mt.finish(out_dir + "/plot.manifest.json", outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transl2e: robust transfer-learning regression with the L2E criterion"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (default: TRANSL2E_THREADS or all cores); "
                 "never changes numeric output");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "penalized L2E regression on one dataset");
  fit->add_option("--data", fit_args.data, "input CSV")->required();
  fit->add_option("--response", fit_args.response, "response column")->required();
  fit->add_option("--penalty", fit_args.penalty, "lasso | group-lasso | none");
  fit->add_option("--lambda", fit_args.lambda, "fixed penalty level");
  fit->add_flag("--cv", fit_args.use_cv, "choose lambda by 5-fold CV (default)");
  fit->add_option("--groups", fit_args.groups, "1-based ranges, e.g. 1-5,6-10");
  fit->add_option("--seed", fit_args.seed, "master seed")->required();
  fit->add_option("--out", fit_args.out, "output JSON")->required();
  fit->add_flag("--standardize", fit_args.standardize, "center/scale features");
  fit->add_flag("--no-header", fit_args.no_header, "file has no header row");

  TransferArgs tr_args;
  CLI::App* tr = app.add_subcommand("transfer", "full TransL2E pipeline");
  tr->add_option("--target", tr_args.target, "target CSV")->required();
  tr->add_option("--source", tr_args.sources, "source CSV (repeatable)");
  tr->add_option("--response", tr_args.response, "response column")->required();
  tr->add_option("--penalty", tr_args.penalty, "lasso | group-lasso | none");
  tr->add_option("--seed", tr_args.seed, "master seed")->required();
  tr->add_option("--out", tr_args.out, "output JSON")->required();
  tr->add_flag("--standardize", tr_args.standardize, "center/scale features");
  tr->add_flag("--no-header", tr_args.no_header, "files have no header row");

  std::string sim_config, sim_out;
  CLI::App* sim = app.add_subcommand("simulate", "generate synthetic cohorts");
  sim->add_option("--config", sim_config, "SimConfig JSON")->required();
  sim->add_option("--out", sim_out, "output directory")->required();

  std::string exp_config, exp_out;
  int exp_replicates = 0;
  CLI::App* exp = app.add_subcommand("experiment", "run a study over a parameter grid");
  exp->add_option("--config", exp_config, "ExperimentConfig JSON")->required();
  exp->add_option("--out", exp_out, "output directory")->required();
  exp->add_option("--replicates", exp_replicates,
                  "override replicate count (e.g. 50 for the full studies)");

  std::string plot_results, plot_out;
  CLI::App* plot = app.add_subcommand("plot", "emit SVG boxplots from results.csv");
  plot->add_option("--results", plot_results, "results.csv path")->required();
  plot->add_option("--out", plot_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  if (threads > 0) set_max_threads(threads);

  try {
    if (*fit) return run_fit(fit_args, argc, argv);
    if (*tr) return run_transfer(tr_args, argc, argv);
    if (*sim) return run_simulate(sim_config, sim_out, argc, argv);
    if (*exp) return run_experiment_cmd(exp_config, exp_out, exp_replicates, argc, argv);
    if (*plot) return run_plot(plot_results, plot_out, argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
