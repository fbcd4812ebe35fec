#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "transl2e/csv.hpp"
#include "transl2e/rng.hpp"
#include "transl2e/simulate.hpp"

using namespace transl2e;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("transl2e_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TRANSL2E_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  nlohmann::json j;
  f >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("fit recovers the noiseless fixture through the CLI") {
  TempDir dir;
  Rng rng(606);
  Dataset d;
  d.X.resize(50, 5);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 5; ++j) d.X(i, j) = rng.normal();
  }
  Eigen::VectorXd beta_true(5);
  beta_true << 2.0, -1.0, 0.5, 0.0, 3.0;
  d.y = d.X * beta_true;
  write_dataset_csv(dir.file("clean.csv"), d);

  const std::string out = dir.file("fit.json");
  const int code = run_cli("fit --data " + dir.file("clean.csv") +
                           " --response y --penalty none --seed 1 --out " + out);
  CHECK(code == 0);

  const auto j = load_json(out);
  REQUIRE(j["beta"].size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(j["beta"][k].get<double>() - beta_true[k]) < 1e-6);
  }
  CHECK(j.contains("tau"));
  CHECK(j.contains("weights"));
  CHECK(j.contains("objective_trace"));

  // the manifest rides along
  const auto manifest = load_json(out + ".manifest.json");
  CHECK(manifest["command"] == "fit");
  CHECK(manifest["outputs"][0] == out);
}

TEST_CASE("fit with group lasso and fixed lambda") {
  TempDir dir;
  Rng rng(607);
  Dataset d;
  d.X.resize(60, 6);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 6; ++j) d.X(i, j) = rng.normal();
  }
  Eigen::VectorXd beta_true(6);
  beta_true << 1.0, 1.0, 0.0, 0.0, 0.0, 0.0;
  d.y = d.X * beta_true;
  for (int i = 0; i < 60; ++i) d.y[i] += 0.1 * rng.normal();
  write_dataset_csv(dir.file("grp.csv"), d);

  const std::string out = dir.file("grp.json");
  const int code = run_cli("fit --data " + dir.file("grp.csv") +
                           " --response y --penalty group-lasso --groups 1-2,3-4,5-6"
                           " --lambda 0.02 --seed 1 --out " + out);
  CHECK(code == 0);
  const auto j = load_json(out);
  CHECK(std::abs(j["beta"][0].get<double>() - 1.0) < 0.2);
  CHECK(j["lambda_used"] == 0.02);
}

TEST_CASE("usage and config errors exit with code 1") {
  TempDir dir;
  CHECK(run_cli("fit --data missing.csv --response y --seed 1 --out " +
                dir.file("x.json")) == 1);
  CHECK(run_cli("bogus-subcommand") == 1);
  CHECK(run_cli("fit") == 1);  // missing required flags

  write_text(dir.file("bad.json"), "{\"experiment\": \"nope\", \"seed\": 1}");
  CHECK(run_cli("experiment --config " + dir.file("bad.json") + " --out " +
                dir.file("out")) == 1);
}

TEST_CASE("simulate then experiment then plot round trip") {
  TempDir dir;
  write_text(dir.file("sim.json"), R"({"n0": 40, "nk": 30, "p": 8, "K": 2,
      "sigma_shift": 0.2, "tau0": 1.0, "nu": 1.0, "r0": 0.1, "rk": 0.1,
      "sparse_support": 3, "shift_support": 5, "seed": 21})");
  CHECK(run_cli("simulate --config " + dir.file("sim.json") + " --out " +
                dir.file("simout")) == 0);
  CHECK(fs::exists(dir.file("simout/target.csv")));
  CHECK(fs::exists(dir.file("simout/source_1.csv")));
  CHECK(fs::exists(dir.file("simout/source_2.csv")));
  CHECK(fs::exists(dir.file("simout/truth.json")));
  CHECK(fs::exists(dir.file("simout/manifest.json")));

  const auto truth = load_json(dir.file("simout/truth.json"));
  CHECK(truth["beta_true_target"].size() == 8);
  CHECK(truth["beta_true_sources"].size() == 2);

  // generated CSVs load back as valid datasets
  CsvSchema schema;
  schema.response = "y";
  const Dataset target = load_dataset(dir.file("simout/target.csv"), schema);
  CHECK(target.n_rows() == 40);
  CHECK(target.n_cols() == 8);

  write_text(dir.file("exp.json"), R"({"experiment": "model_shift",
      "grid": [0.0, 0.4], "replicates": 2,
      "methods": ["target_lasso", "target_l2e"],
      "sim": {"n0": 40, "nk": 30, "p": 8, "K": 1, "sigma_shift": 0.2,
              "r0": 0.1, "rk": 0.1, "sparse_support": 3, "shift_support": 5},
      "seed": 33})");
  CHECK(run_cli("experiment --config " + dir.file("exp.json") + " --out " +
                dir.file("e1")) == 0);
  CHECK(run_cli("experiment --config " + dir.file("exp.json") + " --out " +
                dir.file("e2")) == 0);

  // byte-identical determinism across reruns
  CHECK(slurp(dir.file("e1/results.csv")) == slurp(dir.file("e2/results.csv")));
  CHECK(slurp(dir.file("e1/summary.csv")) == slurp(dir.file("e2/summary.csv")));
  CHECK(fs::exists(dir.file("e1/timings.csv")));
  CHECK(fs::exists(dir.file("e1/manifest.json")));

  CHECK(run_cli("plot --results " + dir.file("e1/results.csv") + " --out " +
                dir.file("plots")) == 0);
  CHECK(fs::exists(dir.file("plots/model_shift.svg")));
  const std::string svg = slurp(dir.file("plots/model_shift.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("target_l2e") != std::string::npos);
}

TEST_CASE("transfer with and without sources") {
  TempDir dir;
  SimConfig sim;
  sim.n0 = 60;
  sim.nk = 50;
  sim.p = 8;
  sim.K = 1;
  sim.sparse_support = 3;
  sim.shift_support = 5;
  auto [target, beta_t] = gen_target(sim, 71);
  auto [source, beta_s] = gen_source(sim, 0, beta_t, 72);
  write_dataset_csv(dir.file("target.csv"), target);
  write_dataset_csv(dir.file("source.csv"), source);

  const std::string out = dir.file("tr.json");
  CHECK(run_cli("transfer --target " + dir.file("target.csv") + " --source " +
                dir.file("source.csv") + " --response y --seed 5 --out " + out) == 0);
  const auto j = load_json(out);
  CHECK(j["beta_final"].size() == 8);
  CHECK(j["per_source"].size() == 1);
  CHECK(j["per_source"][0].contains("hellinger"));
  CHECK(j["per_source"][0].contains("kept_proportion"));
  CHECK(j["per_source"][0].contains("kept_labels"));
  CHECK(j["per_source"][0].contains("lambda_k"));
  CHECK(j.contains("lambda"));
  CHECK(j.contains("mu"));

  // beta_final = beta_colearn + delta, also through the JSON surface
  for (int k = 0; k < 8; ++k) {
    const double lhs = j["beta_final"][k].get<double>();
    const double rhs = j["beta_colearn"][k].get<double>() + j["delta"][k].get<double>();
    CHECK(lhs == rhs);
  }

  // zero sources behaves as the K = 0 pipeline
  const std::string out0 = dir.file("tr0.json");
  CHECK(run_cli("transfer --target " + dir.file("target.csv") +
                " --response y --seed 5 --out " + out0) == 0);
  const auto j0 = load_json(out0);
  CHECK(j0["per_source"].empty());
  CHECK(j0["beta_final"].size() == 8);
}
