#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace sbts {

inline constexpr int kNumTopics = 8;
inline constexpr int kNumLevels = 10;
inline constexpr int kNumCells = kNumTopics * kNumLevels;

// Topic rows, ordered easiest to hardest. The selector only relies on the
// ordering, never on the names.
inline constexpr std::array<std::string_view, kNumTopics> kTopicNames = {
    "if", "for", "while", "methods", "classes", "exceptions", "gui", "reflection"};

// One (topic row, difficulty column) coordinate.
struct TaskCell {
    int topic = 0;  // 0..7
    int level = 0;  // 0..9

    friend constexpr bool operator==(TaskCell a, TaskCell b) {
        return a.topic == b.topic && a.level == b.level;
    }
};

constexpr bool in_bounds(TaskCell cell) {
    return cell.topic >= 0 && cell.topic < kNumTopics && cell.level >= 0 &&
           cell.level < kNumLevels;
}

// Selection-probability grid over all task cells. Legal instances are
// non-negative and sum to 1; the update rule preserves both. Plain value
// type, freely copyable across workers.
struct KnowledgeMatrix {
    std::array<double, kNumCells> cells{};

    static constexpr int index(int topic, int level) { return topic * kNumLevels + level; }

    constexpr double& at(int topic, int level) { return cells[index(topic, level)]; }
    constexpr double at(int topic, int level) const { return cells[index(topic, level)]; }
    constexpr double& operator[](TaskCell cell) { return cells[index(cell.topic, cell.level)]; }
    constexpr double operator[](TaskCell cell) const { return cells[index(cell.topic, cell.level)]; }

    friend bool operator==(const KnowledgeMatrix& a, const KnowledgeMatrix& b) {
        return a.cells == b.cells;
    }
};

// Fresh student: the whole unit of probability mass sits on the easiest
// cell, and the update rule walks it down-right from there.
KnowledgeMatrix new_matrix();

double total_mass(const KnowledgeMatrix& m);

// Skill required by a cell: ((level+1)/10) * (topic+1). Strictly increasing
// along both axes, range [0.1, 8.0].
double cell_skill(TaskCell cell);

// Probability-weighted mean of cell_skill over the matrix.
// Throws DegenerateMassError if |total_mass - 1| > 1e-6.
double user_skill(const KnowledgeMatrix& m);

// Probability-weighted mean difficulty column on the 1..10 scale; the
// summary "skill level" metric. Same mass check as user_skill.
double expected_level(const KnowledgeMatrix& m);

}  // namespace sbts
