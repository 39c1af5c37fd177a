#include "sbts/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <thread>

#include "sbts/errors.hpp"

namespace sbts {

namespace {

// Everything the ordered reduce needs from one student run.
struct RunSummary {
    double final_expected_level = 0.0;
    long correct_count = 0;
    std::vector<std::uint8_t> level_at;  // difficulty column per attempt
    std::vector<double> rate_at;         // cumulative success rate at that attempt
    std::array<std::int32_t, kNumLevels> first_attempt_index;
};

RunSummary compute_run_summary(const ExperimentConfig& config, std::uint64_t run_seed) {
    const long tasks = config.tasks_per_student();
    RunSummary summary;
    summary.level_at.resize(static_cast<std::size_t>(tasks));
    summary.rate_at.resize(static_cast<std::size_t>(tasks));
    summary.first_attempt_index.fill(-1);

    std::array<long, kNumLevels> attempts{};
    std::array<long, kNumLevels> corrects{};
    const KnowledgeMatrix final_matrix = run_student_visit(
        config, run_seed, [&](long t, TaskCell cell, AttemptOutcome outcome) {
            const int level = cell.level;
            ++attempts[static_cast<std::size_t>(level)];
            if (outcome.correct) {
                ++corrects[static_cast<std::size_t>(level)];
                ++summary.correct_count;
            }
            if (summary.first_attempt_index[static_cast<std::size_t>(level)] < 0) {
                summary.first_attempt_index[static_cast<std::size_t>(level)] =
                    static_cast<std::int32_t>(t);
            }
            summary.level_at[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(level);
            summary.rate_at[static_cast<std::size_t>(t)] =
                static_cast<double>(corrects[static_cast<std::size_t>(level)]) /
                static_cast<double>(attempts[static_cast<std::size_t>(level)]);
        });
    summary.final_expected_level = expected_level(final_matrix);
    return summary;
}

long nearest_rank(const std::vector<std::int32_t>& sorted, double percentile) {
    if (sorted.empty()) return -1;
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n));
    if (rank > 0) --rank;
    if (rank >= sorted.size()) rank = sorted.size() - 1;
    return sorted[rank];
}

int resolve_threads(int num_threads) {
    if (num_threads > 0) return num_threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Fold state shared by run_cohort and level_curves so both aggregate the
// same way: sums of per-run cumulative rates per (level, task index).
struct CurveAccumulator {
    long tasks = 0;
    std::vector<double> rate_sum;   // kNumLevels x tasks
    std::vector<long> rate_count;   // kNumLevels x tasks

    explicit CurveAccumulator(long tasks_per_run)
        : tasks(tasks_per_run),
          rate_sum(static_cast<std::size_t>(kNumLevels) * static_cast<std::size_t>(tasks_per_run), 0.0),
          rate_count(static_cast<std::size_t>(kNumLevels) * static_cast<std::size_t>(tasks_per_run), 0) {}

    void add(int level, long task_index, double rate) {
        const auto slot = static_cast<std::size_t>(level) * static_cast<std::size_t>(tasks) +
                          static_cast<std::size_t>(task_index);
        rate_sum[slot] += rate;
        ++rate_count[slot];
    }

    LevelCurves finish() const {
        LevelCurves curves(kNumLevels);
        for (int level = 0; level < kNumLevels; ++level) {
            auto& series = curves[static_cast<std::size_t>(level)];
            for (long t = 0; t < tasks; ++t) {
                const auto slot = static_cast<std::size_t>(level) * static_cast<std::size_t>(tasks) +
                                  static_cast<std::size_t>(t);
                if (rate_count[slot] == 0) continue;
                series.push_back(LevelCurvePoint{
                    t, rate_sum[slot] / static_cast<double>(rate_count[slot]), rate_count[slot]});
            }
        }
        return curves;
    }
};

}  // namespace

StudentRunResult run_student(const ExperimentConfig& config, std::uint64_t run_seed,
                             long student_id, long iteration) {
    StudentRunResult result;
    result.records.reserve(static_cast<std::size_t>(config.tasks_per_student()));
    result.final_matrix = run_student_visit(
        config, run_seed, [&](long t, TaskCell cell, AttemptOutcome outcome) {
            result.records.push_back(AttemptRecord{student_id, iteration, t, cell, outcome});
        });
    return result;
}

MetricsAggregate run_cohort(const ExperimentConfig& config, int num_threads) {
    const long total_runs = config.total_runs();
    const long tasks = config.tasks_per_student();
    const int threads = resolve_threads(num_threads);

    CurveAccumulator curves(tasks);
    double level_sum = 0.0;
    double level_sumsq = 0.0;
    long total_correct = 0;
    std::vector<std::vector<std::int32_t>> first_attempts(kNumLevels);

    const long chunk_size = std::min<long>(std::max<long>(64, 32L * threads), total_runs);
    std::vector<RunSummary> chunk(static_cast<std::size_t>(chunk_size));

    for (long chunk_begin = 0; chunk_begin < total_runs; chunk_begin += chunk_size) {
        const long chunk_end = std::min(chunk_begin + chunk_size, total_runs);
        const long count = chunk_end - chunk_begin;

        auto compute_slot = [&](long offset) {
            const long run_index = chunk_begin + offset;
            const long iteration = run_index / config.num_students;
            const long student = run_index % config.num_students;
            const std::uint64_t seed =
                derive_run_seed(config.master_seed, static_cast<std::uint64_t>(iteration),
                                static_cast<std::uint64_t>(student));
            chunk[static_cast<std::size_t>(offset)] = compute_run_summary(config, seed);
        };

        if (threads == 1 || count == 1) {
            for (long offset = 0; offset < count; ++offset) compute_slot(offset);
        } else {
            std::vector<std::thread> workers;
            std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
            workers.reserve(static_cast<std::size_t>(threads));
            for (int w = 0; w < threads; ++w) {
                workers.emplace_back([&, w] {
                    try {
                        for (long offset = w; offset < count; offset += threads) {
                            compute_slot(offset);
                        }
                    } catch (...) {
                        failures[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            }
            for (auto& worker : workers) worker.join();
            for (const auto& failure : failures) {
                if (failure) std::rethrow_exception(failure);
            }
        }

        // Ordered reduce: fold by global run index, never by completion order.
        for (long offset = 0; offset < count; ++offset) {
            const RunSummary& run = chunk[static_cast<std::size_t>(offset)];
            for (long t = 0; t < tasks; ++t) {
                curves.add(run.level_at[static_cast<std::size_t>(t)], t,
                           run.rate_at[static_cast<std::size_t>(t)]);
            }
            level_sum += run.final_expected_level;
            level_sumsq += run.final_expected_level * run.final_expected_level;
            total_correct += run.correct_count;
            for (int level = 0; level < kNumLevels; ++level) {
                const std::int32_t first = run.first_attempt_index[static_cast<std::size_t>(level)];
                if (first >= 0) first_attempts[static_cast<std::size_t>(level)].push_back(first);
            }
        }
    }

    MetricsAggregate aggregate;
    aggregate.level_curves = curves.finish();
    aggregate.total_runs = total_runs;
    aggregate.total_attempts = total_runs * tasks;
    aggregate.total_correct = total_correct;
    const double n = static_cast<double>(total_runs);
    aggregate.expected_level_mean = level_sum / n;
    const double variance =
        level_sumsq / n - aggregate.expected_level_mean * aggregate.expected_level_mean;
    aggregate.expected_level_std = std::sqrt(std::max(0.0, variance));
    aggregate.first_attempt.resize(kNumLevels);
    for (int level = 0; level < kNumLevels; ++level) {
        auto& values = first_attempts[static_cast<std::size_t>(level)];
        std::sort(values.begin(), values.end());
        auto& stats = aggregate.first_attempt[static_cast<std::size_t>(level)];
        stats.runs_with_data = static_cast<long>(values.size());
        stats.p5 = nearest_rank(values, 5.0);
        stats.p50 = nearest_rank(values, 50.0);
        stats.p95 = nearest_rank(values, 95.0);
    }
    return aggregate;
}

LevelCurves level_curves(std::span<const AttemptRecord> records) {
    if (records.empty()) return LevelCurves(kNumLevels);

    long max_index = 0;
    for (const AttemptRecord& record : records) {
        max_index = std::max(max_index, record.task_index);
    }
    const long tasks = max_index + 1;

    // Group by run, keyed so iteration-major order matches run_cohort's fold.
    std::map<std::pair<long, long>, std::vector<const AttemptRecord*>> runs;
    for (const AttemptRecord& record : records) {
        runs[{record.iteration, record.student_id}].push_back(&record);
    }

    CurveAccumulator curves(tasks);
    for (auto& [key, run_records] : runs) {
        std::sort(run_records.begin(), run_records.end(),
                  [](const AttemptRecord* a, const AttemptRecord* b) {
                      return a->task_index < b->task_index;
                  });
        std::array<long, kNumLevels> attempts{};
        std::array<long, kNumLevels> corrects{};
        for (const AttemptRecord* record : run_records) {
            const auto level = static_cast<std::size_t>(record->cell.level);
            ++attempts[level];
            if (record->outcome.correct) ++corrects[level];
            curves.add(record->cell.level, record->task_index,
                       static_cast<double>(corrects[level]) / static_cast<double>(attempts[level]));
        }
    }
    return curves.finish();
}

long attempts_at_level(const MetricsAggregate& agg, int level_index) {
    long total = 0;
    for (const LevelCurvePoint& point : agg.level_curves[static_cast<std::size_t>(level_index)]) {
        total += point.sample_count;
    }
    return total;
}

std::vector<SummaryRow> summary(
    const std::vector<std::pair<std::string, MetricsAggregate>>& aggregates,
    const std::string& baseline_label) {
    const MetricsAggregate* baseline = nullptr;
    for (const auto& [label, aggregate] : aggregates) {
        if (label == baseline_label) {
            baseline = &aggregate;
            break;
        }
    }
    if (baseline == nullptr) {
        throw UnknownBaselineError("summary: unknown baseline label \"" + baseline_label + "\"");
    }

    std::vector<SummaryRow> rows;
    rows.reserve(aggregates.size());
    rows.push_back(SummaryRow{baseline_label, baseline->expected_level_mean,
                              baseline->expected_level_std, 0.0});
    for (const auto& [label, aggregate] : aggregates) {
        if (label == baseline_label) continue;
        const double pct = (aggregate.expected_level_mean - baseline->expected_level_mean) /
                           baseline->expected_level_mean * 100.0;
        rows.push_back(SummaryRow{label, aggregate.expected_level_mean,
                                  aggregate.expected_level_std, pct});
    }
    return rows;
}

}  // namespace sbts
