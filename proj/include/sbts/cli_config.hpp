#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sbts/experiment.hpp"

namespace sbts {

struct RunSpec {
    ExperimentConfig config;
    std::string label;  // defaults to the model name
    std::string out_dir = "sbts-out";
    int threads = 0;  // 0 = one worker per hardware thread
};

struct CompareSpec {
    std::vector<std::pair<std::string, ExperimentConfig>> runs;
    std::string baseline_label;
    std::string out_dir = "sbts-out";
    int threads = 0;
};

// Parses `run` arguments (everything after the subcommand). The same keys can
// come from a --config key=value file; explicit flags win over file values,
// file values win over defaults. Throws ConfigError on unknown flags, values
// out of range, or flag combinations that do not fit the chosen model.
RunSpec parse_run_args(const std::vector<std::string>& args);

// Parses `compare` arguments plus the labeled multi-run file given with
// --config. Each [label] section holds run keys; keys before the first
// section apply to every run; `baseline` names the reference row (default:
// the first section). Throws ConfigError.
CompareSpec parse_compare_args(const std::vector<std::string>& args);

// Entry point for the sbts binary: subcommands, exit codes, error reporting.
int tool_main(int argc, char** argv);

}  // namespace sbts
