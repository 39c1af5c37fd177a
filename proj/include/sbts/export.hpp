#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sbts/experiment.hpp"

namespace sbts {

inline constexpr const char* kToolVersion = "0.1.0";

// Resolved description of one invocation, echoed verbatim into summary.json so
// a result can be traced back to the exact parameters that produced it.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::uint64_t master_seed = 0;
    int threads = 0;
    std::string baseline_label;
    std::vector<std::string> output_paths;
    double duration_seconds = 0.0;
    std::vector<std::pair<std::string, ExperimentConfig>> runs;
};

// Writes the aggregate's per-level learning curves as CSV. Header:
//   level,task_index,mean_success_rate,sample_count
// Levels are reported 1-based, rates with six decimals, rows sorted by
// (level, task_index). Throws IoError if the file cannot be written.
void write_curves_csv(const MetricsAggregate& aggregate, const std::string& path);

// Writes the comparison table plus the manifest as a single JSON document.
// Throws IoError if the file cannot be written.
void write_summary_json(const std::vector<SummaryRow>& table,
                        const RunManifest& manifest,
                        const std::string& path);

// The model name as spelled on the command line.
std::string variant_name(StudentVariant variant);

}  // namespace sbts
