#include "sbts/student.hpp"

#include <cmath>

namespace sbts {

StudentKnowledge update_knowledge(const StudentKnowledge& k, TaskCell cell,
                                  AttemptOutcome outcome, double eta) {
    if (!outcome.correct) return k;
    StudentKnowledge next = k;
    double& value = next.per_topic[static_cast<std::size_t>(cell.topic)];
    value += eta * (1.0 - value);
    return next;
}

double epsilon_at(const StudentParams& params, long t) {
    switch (params.variant) {
        case StudentVariant::kStatic:
            return 0.0;
        case StudentVariant::kStaticEpsilon:
            return params.epsilon;
        case StudentVariant::kDynamicEpsilon:
            if (t >= params.cutoff) return 0.0;
            return params.epsilon0 *
                   std::exp(-5.0 * static_cast<double>(t) / static_cast<double>(params.cutoff));
    }
    return 0.0;
}

}  // namespace sbts
