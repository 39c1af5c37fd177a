#include "sbts/cli_config.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sbts/errors.hpp"
#include "sbts/export.hpp"

namespace sbts {
namespace {

// Thrown when -h/--help is seen; carries the rendered help text so the
// caller can print it and exit 0 instead of treating it as a config error.
struct HelpRequested {
    std::string text;
};

const CLI::Validator kDecayRange{
    [](std::string& value) -> std::string {
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') {
            return "failed to parse '" + value + "' as a number";
        }
        if (v <= 0.0 || v > 1.0) {
            return "value " + value + " not in (0, 1]";
        }
        return {};
    },
    "FLOAT in (0,1]"};

// Raw flag values plus the option handles needed to tell "given by the
// user" apart from "left at its default".
struct RunFlagState {
    long students = 1000;
    long tasksets = 200;
    long iterations = 100;
    std::string model;
    double p = 0.0;
    double epsilon = 0.3;
    double epsilon0 = 0.7;
    long cutoff = 100;
    double p_explore = 0.0;
    double eta = 0.1;
    double lambda = 0.1;
    double decay = 0.5;
    int span = 1;
    std::uint64_t seed = 1;
    std::string out_dir = "sbts-out";
    int threads = 0;

    CLI::Option* opt_p = nullptr;
    CLI::Option* opt_epsilon = nullptr;
    CLI::Option* opt_epsilon0 = nullptr;
    CLI::Option* opt_cutoff = nullptr;
    CLI::Option* opt_p_explore = nullptr;
    CLI::Option* opt_eta = nullptr;
};

void add_run_flags(CLI::App& app, RunFlagState& state, bool with_config_file) {
    app.add_option("--students", state.students, "Students per iteration (default 1000)")
        ->check(CLI::PositiveNumber);
    app.add_option("--tasksets", state.tasksets,
                   "Task-sets per student, ten tasks each (default 200)")
        ->check(CLI::PositiveNumber);
    app.add_option("--iterations", state.iterations,
                   "Independent cohort repetitions (default 100)")
        ->check(CLI::PositiveNumber);
    app.add_option("--model", state.model, "Student model")
        ->required()
        ->check(CLI::IsMember({"static", "static-eps", "dynamic"}));
    state.opt_p =
        app.add_option("--p", state.p, "static model: probability of answering correctly")
            ->check(CLI::Range(0.0, 1.0));
    state.opt_epsilon =
        app.add_option("--epsilon", state.epsilon,
                       "static-eps model: exploration probability (default 0.3)")
            ->check(CLI::Range(0.0, 1.0));
    state.opt_epsilon0 =
        app.add_option("--epsilon0", state.epsilon0,
                       "dynamic model: exploration probability at t = 0 (default 0.7)")
            ->check(CLI::Range(0.0, 1.0));
    state.opt_cutoff =
        app.add_option("--cutoff", state.cutoff,
                       "dynamic model: attempt index where exploration stops (default 100)")
            ->check(CLI::PositiveNumber);
    state.opt_p_explore =
        app.add_option("--p-explore", state.p_explore,
                       "eps models: success probability while exploring")
            ->check(CLI::Range(0.0, 1.0));
    state.opt_eta =
        app.add_option("--eta", state.eta,
                       "eps models: knowledge gained on a correct answer (default 0.1)")
            ->check(CLI::Range(0.0, 1.0));
    app.add_option("--lambda", state.lambda,
                   "Learning-speed factor of the matrix update (default 0.1)")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--decay", state.decay,
                   "Within-set repeat-selection decay factor (default 0.5)")
        ->check(kDecayRange);
    app.add_option("--span", state.span,
                   "Neighbor cells per axis receiving removed mass (default 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", state.seed, "Master seed (default 1)");
    app.add_option("--out", state.out_dir, "Output directory (default sbts-out)");
    app.add_option("--threads", state.threads, "Worker threads, 0 = all hardware threads")
        ->check(CLI::NonNegativeNumber);
    if (with_config_file) {
        app.set_config("--config", "", "Flat key=value file mirroring the flag names");
        app.allow_config_extras(CLI::config_extras_mode::error);
    }
}

StudentVariant parse_variant(const std::string& name) {
    if (name == "static") {
        return StudentVariant::kStatic;
    }
    if (name == "static-eps") {
        return StudentVariant::kStaticEpsilon;
    }
    if (name == "dynamic") {
        return StudentVariant::kDynamicEpsilon;
    }
    throw ConfigError("--model must be one of static, static-eps, dynamic (got '" + name + "')");
}

void reject_if_given(const CLI::Option* opt, const std::string& flag, const std::string& reason) {
    if (opt != nullptr && opt->count() > 0) {
        throw ConfigError(flag + " " + reason);
    }
}

RunSpec finalize_run(const RunFlagState& state) {
    const StudentVariant variant = parse_variant(state.model);

    StudentParams model;
    model.variant = variant;
    switch (variant) {
        case StudentVariant::kStatic:
            if (state.opt_p == nullptr || state.opt_p->count() == 0) {
                throw ConfigError("--model static requires --p");
            }
            reject_if_given(state.opt_epsilon, "--epsilon", "only applies to --model static-eps");
            reject_if_given(state.opt_epsilon0, "--epsilon0", "only applies to --model dynamic");
            reject_if_given(state.opt_cutoff, "--cutoff", "only applies to --model dynamic");
            reject_if_given(state.opt_p_explore, "--p-explore",
                            "only applies to --model static-eps or dynamic");
            reject_if_given(state.opt_eta, "--eta",
                            "only applies to --model static-eps or dynamic");
            model.p_success = state.p;
            break;
        case StudentVariant::kStaticEpsilon:
            if (state.opt_p_explore == nullptr || state.opt_p_explore->count() == 0) {
                throw ConfigError("--model static-eps requires --p-explore");
            }
            reject_if_given(state.opt_p, "--p", "only applies to --model static");
            reject_if_given(state.opt_epsilon0, "--epsilon0", "only applies to --model dynamic");
            reject_if_given(state.opt_cutoff, "--cutoff", "only applies to --model dynamic");
            model.epsilon = state.epsilon;
            model.p_explore = state.p_explore;
            model.eta = state.eta;
            break;
        case StudentVariant::kDynamicEpsilon:
            if (state.opt_p_explore == nullptr || state.opt_p_explore->count() == 0) {
                throw ConfigError("--model dynamic requires --p-explore");
            }
            reject_if_given(state.opt_p, "--p", "only applies to --model static");
            reject_if_given(state.opt_epsilon, "--epsilon", "only applies to --model static-eps");
            model.epsilon0 = state.epsilon0;
            model.cutoff = state.cutoff;
            model.p_explore = state.p_explore;
            model.eta = state.eta;
            break;
    }

    RunSpec spec;
    spec.config.num_students = state.students;
    spec.config.tasksets_per_student = state.tasksets;
    spec.config.iterations = state.iterations;
    spec.config.model = model;
    spec.config.policy.lambda = state.lambda;
    spec.config.policy.neighbor_span = state.span;
    spec.config.decay.factor = state.decay;
    spec.config.master_seed = state.seed;
    spec.label = state.model;
    spec.out_dir = state.out_dir;
    spec.threads = state.threads;
    return spec;
}

RunSpec parse_run_vector(const std::vector<std::string>& args, bool with_config_file) {
    CLI::App app{"Simulate one student model against the adaptive task selector"};
    app.name("sbts run");
    RunFlagState state;
    add_run_flags(app, state, with_config_file);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    return finalize_run(state);
}

// ---- compare config file ----------------------------------------------

// Keys accepted inside [label] sections and in the preamble defaults.
const std::set<std::string> kRunKeys = {
    "students", "tasksets", "iterations", "model",  "p",     "epsilon", "epsilon0",
    "cutoff",   "p-explore", "eta",       "lambda", "decay", "span",    "seed"};

struct CompareFile {
    std::map<std::string, std::string> defaults;
    std::vector<std::pair<std::string, std::map<std::string, std::string>>> sections;
    std::string baseline;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool valid_label(const std::string& label) {
    if (label.empty()) {
        return false;
    }
    for (const char c : label) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

CompareFile parse_compare_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open compare config file: " + path);
    }

    CompareFile file;
    std::map<std::string, std::string>* current = &file.defaults;
    bool in_preamble = true;
    std::set<std::string> seen_labels;
    std::string line;
    long line_no = 0;
    const auto where = [&] { return " (" + path + ", line " + std::to_string(line_no) + ")"; };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw ConfigError("malformed section header '" + text + "'" + where());
            }
            const std::string label = trim(text.substr(1, text.size() - 2));
            if (!valid_label(label)) {
                throw ConfigError("invalid run label '" + label +
                                  "' (use letters, digits, '.', '_', '-')" + where());
            }
            if (!seen_labels.insert(label).second) {
                throw ConfigError("duplicate run label '" + label + "'" + where());
            }
            file.sections.emplace_back(label, std::map<std::string, std::string>{});
            current = &file.sections.back().second;
            in_preamble = false;
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value' but got '" + text + "'" + where());
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError("empty value for key '" + key + "'" + where());
        }
        if (in_preamble && key == "baseline") {
            file.baseline = value;
            continue;
        }
        if (kRunKeys.count(key) == 0) {
            throw ConfigError("unknown key '" + key + "'" + where());
        }
        if (current->count(key) > 0) {
            throw ConfigError("duplicate key '" + key + "'" + where());
        }
        (*current)[key] = value;
    }
    if (file.sections.empty()) {
        throw ConfigError("compare config file has no [label] sections: " + path);
    }
    return file;
}

std::vector<std::string> kv_to_args(const std::map<std::string, std::string>& kv) {
    std::vector<std::string> args;
    args.reserve(kv.size() * 2);
    for (const auto& [key, value] : kv) {
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

// ---- output helpers ----------------------------------------------------

void print_summary_table(const std::vector<SummaryRow>& rows) {
    std::printf("%-24s %16s %12s %14s\n", "label", "expected_level", "std", "vs baseline");
    for (const SummaryRow& row : rows) {
        std::printf("%-24s %16.3f %12.3f %+13.1f%%\n", row.label.c_str(),
                    row.expected_level_mean, row.expected_level_std,
                    row.pct_change_vs_baseline);
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double>(elapsed).count();
}

int run_command(const std::vector<std::string>& args) {
    const RunSpec spec = parse_run_args(args);
    std::filesystem::create_directories(spec.out_dir);

    const auto start = std::chrono::steady_clock::now();
    const MetricsAggregate aggregate = run_cohort(spec.config, spec.threads);
    const std::vector<SummaryRow> rows = summary({{spec.label, aggregate}}, spec.label);

    RunManifest manifest;
    manifest.master_seed = spec.config.master_seed;
    manifest.threads = spec.threads;
    manifest.baseline_label = spec.label;
    manifest.runs = {{spec.label, spec.config}};
    const std::string curves_path = (std::filesystem::path(spec.out_dir) / "curves.csv").string();
    const std::string summary_path =
        (std::filesystem::path(spec.out_dir) / "summary.json").string();
    manifest.output_paths = {curves_path, summary_path};
    manifest.duration_seconds = seconds_since(start);

    write_curves_csv(aggregate, curves_path);
    write_summary_json(rows, manifest, summary_path);

    print_summary_table(rows);
    std::printf("attempts: %ld  runs: %ld\n", aggregate.total_attempts, aggregate.total_runs);
    std::printf("wrote %s\nwrote %s\n", curves_path.c_str(), summary_path.c_str());
    return 0;
}

int compare_command(const std::vector<std::string>& args) {
    const CompareSpec spec = parse_compare_args(args);
    std::filesystem::create_directories(spec.out_dir);

    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.baseline_label = spec.baseline_label;
    manifest.threads = spec.threads;
    manifest.master_seed = spec.runs.front().second.master_seed;
    manifest.runs = spec.runs;

    std::vector<std::pair<std::string, MetricsAggregate>> aggregates;
    aggregates.reserve(spec.runs.size());
    for (const auto& [label, config] : spec.runs) {
        aggregates.emplace_back(label, run_cohort(config, spec.threads));
        const std::string curves_path =
            (std::filesystem::path(spec.out_dir) / ("curves_" + label + ".csv")).string();
        write_curves_csv(aggregates.back().second, curves_path);
        manifest.output_paths.push_back(curves_path);
    }
    const std::vector<SummaryRow> rows = summary(aggregates, spec.baseline_label);

    const std::string summary_path =
        (std::filesystem::path(spec.out_dir) / "summary.json").string();
    manifest.output_paths.push_back(summary_path);
    manifest.duration_seconds = seconds_since(start);
    write_summary_json(rows, manifest, summary_path);

    print_summary_table(rows);
    for (const std::string& path : manifest.output_paths) {
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

const char* kUsage =
    "usage: sbts <command> [flags]\n"
    "\n"
    "commands:\n"
    "  run       simulate one student model and export its curves\n"
    "  compare   run labeled configs from one file and compare them\n"
    "\n"
    "run `sbts run --help` or `sbts compare --help` for the flag list\n";

}  // namespace

RunSpec parse_run_args(const std::vector<std::string>& args) {
    return parse_run_vector(args, true);
}

CompareSpec parse_compare_args(const std::vector<std::string>& args) {
    CLI::App app{"Run every labeled config from one file and compare the results"};
    app.name("sbts compare");

    std::string config_path;
    CompareSpec spec;
    std::string baseline_flag;
    app.add_option("--config", config_path,
                   "Labeled run file: [label] sections with run keys, shared keys before "
                   "the first section, optional 'baseline = LABEL'")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", spec.out_dir, "Output directory (default sbts-out)");
    app.add_option("--threads", spec.threads, "Worker threads, 0 = all hardware threads")
        ->check(CLI::NonNegativeNumber);
    CLI::Option* opt_baseline =
        app.add_option("--baseline", baseline_flag, "Baseline label (overrides the file)");

    // Scale knobs applied on top of every section, raw tokens preserved.
    const std::vector<std::string> override_keys = {"students", "tasksets", "iterations",
                                                    "seed",     "lambda",   "decay",
                                                    "span"};
    std::map<std::string, std::string> override_values;
    std::map<std::string, CLI::Option*> override_opts;
    for (const std::string& key : override_keys) {
        override_opts[key] =
            app.add_option("--" + key, override_values[key], "Override for every run");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    const CompareFile file = parse_compare_file(config_path);
    for (const auto& [label, section] : file.sections) {
        std::map<std::string, std::string> merged = file.defaults;
        for (const auto& [key, value] : section) {
            merged[key] = value;
        }
        for (const std::string& key : override_keys) {
            if (override_opts[key]->count() > 0) {
                merged[key] = override_opts[key]->results().front();
            }
        }
        try {
            const RunSpec run = parse_run_vector(kv_to_args(merged), false);
            spec.runs.emplace_back(label, run.config);
        } catch (const ConfigError& e) {
            throw ConfigError("run '" + label + "': " + e.what());
        }
    }

    spec.baseline_label = file.baseline;
    if (opt_baseline->count() > 0) {
        spec.baseline_label = baseline_flag;
    }
    if (spec.baseline_label.empty()) {
        spec.baseline_label = spec.runs.front().first;
    }
    bool baseline_known = false;
    for (const auto& [label, config] : spec.runs) {
        baseline_known = baseline_known || label == spec.baseline_label;
    }
    if (!baseline_known) {
        throw ConfigError("baseline '" + spec.baseline_label +
                          "' does not match any [label] section in " + config_path);
    }
    return spec;
}

int tool_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (args.empty()) {
            std::fputs(kUsage, stderr);
            return 2;
        }
        const std::string command = args.front();
        const std::vector<std::string> rest(args.begin() + 1, args.end());
        if (command == "-h" || command == "--help" || command == "help") {
            std::fputs(kUsage, stdout);
            return 0;
        }
        if (command == "--version" || command == "version") {
            std::printf("sbts %s\n", kToolVersion);
            return 0;
        }
        if (command == "run") {
            return run_command(rest);
        }
        if (command == "compare") {
            return compare_command(rest);
        }
        std::fprintf(stderr, "unknown command '%s'\n%s", command.c_str(), kUsage);
        return 2;
    } catch (const HelpRequested& help) {
        std::fputs(help.text.c_str(), stdout);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace sbts
