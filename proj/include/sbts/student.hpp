#pragma once

#include <array>
#include <cstdint>

#include "sbts/knowledge_matrix.hpp"
#include "sbts/policy.hpp"
#include "sbts/rng.hpp"

namespace sbts {

// The simulated student's actual per-topic knowledge, in [0, 1]. Disjoint
// from the selector's knowledge matrix.
struct StudentKnowledge {
    std::array<double, kNumTopics> per_topic{};
};

enum class StudentVariant {
    kStatic,          // constant success probability, no knowledge state
    kStaticEpsilon,   // fixed exploration rate over a knowledge state
    kDynamicEpsilon,  // exploration rate decays to zero at a task cutoff
};

struct StudentParams {
    StudentVariant variant = StudentVariant::kStatic;
    double p_success = 0.0;  // static: pass probability per attempt
    double epsilon = 0.3;    // static epsilon: exploration rate
    double epsilon0 = 0.7;   // dynamic: exploration rate at t = 0
    long cutoff = 100;       // dynamic: tasks until exploitation-only
    double p_explore = 0.0;  // epsilon variants: pass probability while exploring
    double eta = 0.1;        // knowledge gain rate per correct answer
};

// Geometric approach toward full knowledge on the attempted topic; wrong
// answers leave it unchanged.
StudentKnowledge update_knowledge(const StudentKnowledge& k, TaskCell cell,
                                  AttemptOutcome outcome, double eta = 0.1);

// Exploration rate at task count t. Static models are constant; the
// dynamic schedule is epsilon0 * exp(-5 t / cutoff), hard zero from
// t = cutoff on.
double epsilon_at(const StudentParams& params, long t);

// One simulated student: immutable parameters plus mutable knowledge.
// Owns no randomness; every draw comes from the caller's stream.
class StudentModel {
public:
    StudentModel() = default;
    explicit StudentModel(const StudentParams& params, StudentKnowledge knowledge = {})
        : params_(params), knowledge_(knowledge) {}

    const StudentParams& params() const { return params_; }
    const StudentKnowledge& knowledge() const { return knowledge_; }

    double epsilon_at(long t) const { return sbts::epsilon_at(params_, t); }

    // Answers one task. Static: one uniform draw against p_success.
    // Epsilon variants: one gate draw against epsilon_at(t); below it,
    // exploration succeeds on a second draw against p_explore, otherwise
    // exploitation passes exactly when knowledge reaches the cell's
    // (level+1)/10 threshold. Correct answers feed update_knowledge.
    // Draw counts per branch are fixed and documented in the README.
    template <class Urbg>
    AttemptOutcome attempt(TaskCell cell, long t, Urbg& rng) {
        bool correct = false;
        if (params_.variant == StudentVariant::kStatic) {
            correct = uniform01(rng) < params_.p_success;
            return AttemptOutcome{correct};
        }
        const double gate = uniform01(rng);
        if (gate < epsilon_at(t)) {
            correct = uniform01(rng) < params_.p_explore;
        } else {
            correct = knowledge_.per_topic[static_cast<std::size_t>(cell.topic)] >=
                      static_cast<double>(cell.level + 1) / kNumLevels;
        }
        if (correct) {
            knowledge_ = update_knowledge(knowledge_, cell, AttemptOutcome{true}, params_.eta);
        }
        return AttemptOutcome{correct};
    }

private:
    StudentParams params_;
    StudentKnowledge knowledge_;
};

}  // namespace sbts
