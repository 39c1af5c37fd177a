#pragma once

#include <vector>

#include "sbts/knowledge_matrix.hpp"

namespace sbts {

// Tunables of the reward/punish update rule.
struct PolicyParams {
    double lambda = 0.1;   // learning speed, in [0, 1]
    int neighbor_span = 1; // cells redistributed to per axis, >= 1
};

struct AttemptOutcome {
    bool correct = false;
};

// Surprise factor: (task_skill - user_skill)^2 + 0.5. Symmetric in the
// sign of the gap, minimum 0.5 at a perfectly matched task.
double beta(double task_skill, double user_skill);

// Redistribution targets for one update. Correct answers push mass toward
// harder cells (level+1..level+span on the same row, then topic+1..topic+span
// on the same column); wrong answers mirror toward easier ones. Out-of-bounds
// cells are dropped, so the list is empty at the two extreme corners.
// Order is fixed (level axis nearest-first, then topic axis) and is part of
// the reproducibility contract.
std::vector<TaskCell> update_targets(TaskCell cell, AttemptOutcome outcome, int span);

// One reward/punish step. Removes old_prob * clamp(lambda * beta, 0, 1)
// from the selected cell and splits it equally over the targets; with no
// in-bounds target the matrix is returned unchanged. Mass is conserved.
void apply_update_in_place(KnowledgeMatrix& m, TaskCell cell, AttemptOutcome outcome,
                           const PolicyParams& params);

KnowledgeMatrix apply_update(const KnowledgeMatrix& m, TaskCell cell,
                             AttemptOutcome outcome, const PolicyParams& params);

}  // namespace sbts
