#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sbts/knowledge_matrix.hpp"
#include "sbts/policy.hpp"
#include "sbts/rng.hpp"
#include "sbts/student.hpp"
#include "sbts/task_generation.hpp"

namespace sbts {

struct ExperimentConfig {
    long num_students = 1000;
    long tasksets_per_student = 200;
    long iterations = 100;  // independent cohort repetitions, averaged
    StudentParams model;    // knowledge always starts zeroed per run
    PolicyParams policy;
    DecayParams decay;
    std::uint64_t master_seed = 1;

    long tasks_per_student() const { return tasksets_per_student * kTaskSetSize; }
    long total_runs() const { return num_students * iterations; }
};

struct AttemptRecord {
    long student_id = 0;
    long iteration = 0;
    long task_index = 0;  // 0-based global index within one student run
    TaskCell cell;
    AttemptOutcome outcome;
};

struct LevelCurvePoint {
    long task_index = 0;
    double mean_success_rate = 0.0;  // mean of per-run cumulative rates
    long sample_count = 0;           // runs contributing at this index
};

// [i] holds the series for difficulty column i, reported 1-based as level i+1.
using LevelCurves = std::vector<std::vector<LevelCurvePoint>>;

// Nearest-rank percentiles of the first task index at which runs attempted
// a level; the measurable analogue of "when students started" each column.
struct FirstAttemptStats {
    long runs_with_data = 0;
    long p5 = -1;
    long p50 = -1;
    long p95 = -1;
};

struct MetricsAggregate {
    LevelCurves level_curves;  // size kNumLevels
    double expected_level_mean = 0.0;
    double expected_level_std = 0.0;  // population standard deviation
    long total_runs = 0;
    long total_attempts = 0;
    long total_correct = 0;
    std::vector<FirstAttemptStats> first_attempt;  // size kNumLevels
};

// Attempts recorded at one level across the whole aggregate.
long attempts_at_level(const MetricsAggregate& agg, int level_index);

struct StudentRunResult {
    std::vector<AttemptRecord> records;
    KnowledgeMatrix final_matrix;
};

// Core per-run loop, shared by the trace-collecting and the streaming
// paths: fresh matrix, then per task-set a batch of ten sampled cells,
// each answered (t = global task index) and immediately applied to the
// matrix. One generator drives both sampling and the student.
template <class OnAttempt>
KnowledgeMatrix run_student_visit(const ExperimentConfig& config, std::uint64_t run_seed,
                                  OnAttempt&& on_attempt) {
    Xoshiro256StarStar rng(run_seed);
    KnowledgeMatrix matrix = new_matrix();
    StudentModel student(config.model);
    long t = 0;
    for (long set = 0; set < config.tasksets_per_student; ++set) {
        const TaskSet task_set = generate_taskset(matrix, config.decay, rng);
        for (const TaskCell cell : task_set.tasks) {
            const AttemptOutcome outcome = student.attempt(cell, t, rng);
            on_attempt(t, cell, outcome);
            apply_update_in_place(matrix, cell, outcome, config.policy);
            ++t;
        }
    }
    return matrix;
}

// Full trace of one student run. Deterministic given the seed.
StudentRunResult run_student(const ExperimentConfig& config, std::uint64_t run_seed,
                             long student_id = 0, long iteration = 0);

// Runs num_students x iterations independent student runs, seeds derived
// per (iteration, student) from the master seed. Workers compute per-run
// summaries in parallel; the reduce folds them in fixed (iteration,
// student) order, so the aggregate is bit-identical for any worker count.
// num_threads <= 0 picks the hardware concurrency.
MetricsAggregate run_cohort(const ExperimentConfig& config, int num_threads = 0);

// Offline counterpart to run_cohort's streaming aggregation; groups records
// by (iteration, student) run and averages per-run cumulative success rates
// per level and task index.
LevelCurves level_curves(std::span<const AttemptRecord> records);

struct SummaryRow {
    std::string label;
    double expected_level_mean = 0.0;
    double expected_level_std = 0.0;
    double pct_change_vs_baseline = 0.0;
};

// Comparison table over labeled aggregates; the baseline row comes first,
// the rest keep their given order. Throws UnknownBaselineError.
std::vector<SummaryRow> summary(
    const std::vector<std::pair<std::string, MetricsAggregate>>& aggregates,
    const std::string& baseline_label);

}  // namespace sbts
