#include "sbts/policy.hpp"

#include <algorithm>

namespace sbts {

double beta(double task_skill, double user_skill) {
    const double gap = task_skill - user_skill;
    return gap * gap + 0.5;
}

std::vector<TaskCell> update_targets(TaskCell cell, AttemptOutcome outcome, int span) {
    const int step = outcome.correct ? 1 : -1;
    std::vector<TaskCell> targets;
    targets.reserve(static_cast<std::size_t>(2 * span));
    for (int k = 1; k <= span; ++k) {
        TaskCell along_level{cell.topic, cell.level + step * k};
        if (!in_bounds(along_level)) break;
        targets.push_back(along_level);
    }
    for (int k = 1; k <= span; ++k) {
        TaskCell along_topic{cell.topic + step * k, cell.level};
        if (!in_bounds(along_topic)) break;
        targets.push_back(along_topic);
    }
    return targets;
}

void apply_update_in_place(KnowledgeMatrix& m, TaskCell cell, AttemptOutcome outcome,
                           const PolicyParams& params) {
    const double surprise = beta(cell_skill(cell), user_skill(m));
    const double keep = std::clamp(1.0 - params.lambda * surprise, 0.0, 1.0);

    // Cheap fixed-span fast path; the general path allocates only for span > 1.
    const int step = outcome.correct ? 1 : -1;
    TaskCell fixed[2];
    int count = 0;
    std::vector<TaskCell> general;
    const TaskCell* targets = fixed;
    if (params.neighbor_span == 1) {
        TaskCell along_level{cell.topic, cell.level + step};
        TaskCell along_topic{cell.topic + step, cell.level};
        if (in_bounds(along_level)) fixed[count++] = along_level;
        if (in_bounds(along_topic)) fixed[count++] = along_topic;
    } else {
        general = update_targets(cell, outcome, params.neighbor_span);
        targets = general.data();
        count = static_cast<int>(general.size());
    }
    if (count == 0) return;

    const double old_prob = m[cell];
    const double new_prob = old_prob * keep;
    const double diff = (old_prob - new_prob) / count;
    m[cell] = new_prob;
    for (int i = 0; i < count; ++i) m[targets[i]] += diff;
}

KnowledgeMatrix apply_update(const KnowledgeMatrix& m, TaskCell cell,
                             AttemptOutcome outcome, const PolicyParams& params) {
    KnowledgeMatrix result = m;
    apply_update_in_place(result, cell, outcome, params);
    return result;
}

}  // namespace sbts
