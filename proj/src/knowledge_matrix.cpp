#include "sbts/knowledge_matrix.hpp"

#include <cmath>
#include <string>

#include "sbts/errors.hpp"

namespace sbts {

namespace {

constexpr double kMassTolerance = 1e-6;

void check_unit_mass(const KnowledgeMatrix& m, const char* op) {
    const double mass = total_mass(m);
    if (std::abs(mass - 1.0) > kMassTolerance) {
        throw DegenerateMassError(std::string(op) + ": matrix mass is " +
                                  std::to_string(mass) + ", expected 1.0");
    }
}

}  // namespace

KnowledgeMatrix new_matrix() {
    KnowledgeMatrix m;
    m.at(0, 0) = 1.0;
    return m;
}

double total_mass(const KnowledgeMatrix& m) {
    double sum = 0.0;
    for (double p : m.cells) sum += p;
    return sum;
}

double cell_skill(TaskCell cell) {
    return (static_cast<double>(cell.level + 1) / kNumLevels) *
           static_cast<double>(cell.topic + 1);
}

double user_skill(const KnowledgeMatrix& m) {
    check_unit_mass(m, "user_skill");
    double sum = 0.0;
    for (int topic = 0; topic < kNumTopics; ++topic) {
        for (int level = 0; level < kNumLevels; ++level) {
            sum += m.at(topic, level) * cell_skill({topic, level});
        }
    }
    return sum;
}

double expected_level(const KnowledgeMatrix& m) {
    check_unit_mass(m, "expected_level");
    double sum = 0.0;
    for (int topic = 0; topic < kNumTopics; ++topic) {
        for (int level = 0; level < kNumLevels; ++level) {
            sum += m.at(topic, level) * static_cast<double>(level + 1);
        }
    }
    return sum;
}

}  // namespace sbts
