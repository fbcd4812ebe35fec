#pragma once

#include <string>

#include "transl2e/experiments.hpp"

namespace transl2e {

// One SVG per experiment in the table: grouped boxplots of rel_err and f1
// against the grid variable, one box per method. Returns the written paths.
std::vector<std::string> write_experiment_svgs(const ResultsTable& table,
                                               const std::string& out_dir);

}  // namespace transl2e
