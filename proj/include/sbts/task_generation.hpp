#pragma once

#include <array>

#include "sbts/errors.hpp"
#include "sbts/knowledge_matrix.hpp"
#include "sbts/rng.hpp"

namespace sbts {

inline constexpr int kTaskSetSize = 10;

// One assignment round: ten sampled cells, in draw order.
struct TaskSet {
    std::array<TaskCell, kTaskSetSize> tasks{};
};

// Within-set repetition damping. Each time a cell is drawn its transient
// weight is multiplied by factor; weights reset to 1 for the next set and
// never touch the knowledge matrix itself.
struct DecayParams {
    double factor = 0.5;  // in (0, 1]
};

using WeightGrid = std::array<double, kNumCells>;

inline WeightGrid unit_weights() {
    WeightGrid w;
    w.fill(1.0);
    return w;
}

// Categorical draw proportional to m(cell) * weights(cell), scanning cells
// in row-major (topic, level) order. The scan order is part of the
// reproducibility contract. Throws EmptySupportError when every effective
// weight is zero.
template <class Urbg>
TaskCell sample_cell(const KnowledgeMatrix& m, const WeightGrid& weights, Urbg& rng) {
    double total = 0.0;
    for (int i = 0; i < kNumCells; ++i) total += m.cells[i] * weights[i];
    if (total <= 0.0) {
        throw EmptySupportError("sample_cell: all effective weights are zero");
    }
    const double target = uniform01(rng) * total;
    double cumulative = 0.0;
    int last_positive = -1;
    for (int i = 0; i < kNumCells; ++i) {
        const double effective = m.cells[i] * weights[i];
        if (effective <= 0.0) continue;
        last_positive = i;
        cumulative += effective;
        if (cumulative > target) break;
    }
    // last_positive also covers the rounding edge where cumulative never
    // exceeds target.
    return TaskCell{last_positive / kNumLevels, last_positive % kNumLevels};
}

template <class Urbg>
TaskSet generate_taskset(const KnowledgeMatrix& m, const DecayParams& decay, Urbg& rng) {
    WeightGrid weights = unit_weights();
    TaskSet set;
    for (int i = 0; i < kTaskSetSize; ++i) {
        const TaskCell cell = sample_cell(m, weights, rng);
        weights[KnowledgeMatrix::index(cell.topic, cell.level)] *= decay.factor;
        set.tasks[i] = cell;
    }
    return set;
}

}  // namespace sbts
