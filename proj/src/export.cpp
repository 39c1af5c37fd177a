#include "sbts/export.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "sbts/errors.hpp"

namespace sbts {

namespace {

std::ofstream open_for_writing(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    return out;
}

void finish_writing(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

nlohmann::ordered_json config_to_json(const std::string& label, const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["students"] = config.num_students;
    j["tasksets"] = config.tasksets_per_student;
    j["iterations"] = config.iterations;
    j["seed"] = config.master_seed;
    j["lambda"] = config.policy.lambda;
    j["span"] = config.policy.neighbor_span;
    j["decay"] = config.decay.factor;
    j["model"] = variant_name(config.model.variant);
    switch (config.model.variant) {
        case StudentVariant::kStatic:
            j["p"] = config.model.p_success;
            break;
        case StudentVariant::kStaticEpsilon:
            j["epsilon"] = config.model.epsilon;
            j["p-explore"] = config.model.p_explore;
            j["eta"] = config.model.eta;
            break;
        case StudentVariant::kDynamicEpsilon:
            j["epsilon0"] = config.model.epsilon0;
            j["cutoff"] = config.model.cutoff;
            j["p-explore"] = config.model.p_explore;
            j["eta"] = config.model.eta;
            break;
    }
    return j;
}

}  // namespace

std::string variant_name(StudentVariant variant) {
    switch (variant) {
        case StudentVariant::kStatic:
            return "static";
        case StudentVariant::kStaticEpsilon:
            return "static-eps";
        case StudentVariant::kDynamicEpsilon:
            return "dynamic";
    }
    return "unknown";
}

void write_curves_csv(const MetricsAggregate& aggregate, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "level,task_index,mean_success_rate,sample_count\n";
    char row[96];
    const LevelCurves& curves = aggregate.level_curves;
    for (std::size_t level_index = 0; level_index < curves.size(); ++level_index) {
        for (const LevelCurvePoint& point : curves[level_index]) {
            std::snprintf(row, sizeof(row), "%d,%ld,%.6f,%ld\n", static_cast<int>(level_index + 1),
                          point.task_index, point.mean_success_rate, point.sample_count);
            out << row;
        }
    }
    finish_writing(out, path);
}

void write_summary_json(const std::vector<SummaryRow>& table, const RunManifest& manifest,
                        const std::string& path) {
    nlohmann::ordered_json doc;

    nlohmann::ordered_json m;
    m["tool_version"] = manifest.tool_version;
    m["master_seed"] = manifest.master_seed;
    m["threads"] = manifest.threads;
    m["baseline"] = manifest.baseline_label;
    m["outputs"] = manifest.output_paths;
    m["duration_seconds"] = manifest.duration_seconds;
    m["runs"] = nlohmann::ordered_json::array();
    for (const auto& [label, config] : manifest.runs) {
        m["runs"].push_back(config_to_json(label, config));
    }
    doc["manifest"] = std::move(m);

    doc["results"] = nlohmann::ordered_json::array();
    for (const SummaryRow& row : table) {
        nlohmann::ordered_json r;
        r["label"] = row.label;
        r["expected_level_mean"] = row.expected_level_mean;
        r["expected_level_std"] = row.expected_level_std;
        r["pct_change_vs_baseline"] = row.pct_change_vs_baseline;
        doc["results"].push_back(std::move(r));
    }

    std::ofstream out = open_for_writing(path);
    out << doc.dump(2) << '\n';
    finish_writing(out, path);
}

}  // namespace sbts
