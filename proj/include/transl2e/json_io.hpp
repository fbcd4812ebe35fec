#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "transl2e/experiments.hpp"
#include "transl2e/simulate.hpp"
#include "transl2e/solver.hpp"
#include "transl2e/transfer.hpp"

namespace transl2e {

nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const TransferResult& res);

// Strict parsers: unknown keys are rejected so config typos fail loudly.
SimConfig sim_config_from_json(const nlohmann::json& j);

struct ExperimentRun {
  ExperimentConfig experiment;
  SimConfig sim;
  std::uint64_t seed = 0;
};
ExperimentRun experiment_run_from_json(const nlohmann::json& j);

// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::string config_digest;  // fnv1a64 over the resolved configuration bytes
  std::uint64_t master_seed = 0;
  std::string version;
  double wall_clock_ms = 0.0;
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const RunManifest& m);
void write_manifest(const std::string& path, const RunManifest& m);

// stable 64-bit content digest, hex encoded
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace transl2e
