#include "doctest.h"

#include <cmath>

#include "sbts/rng.hpp"
#include "sbts/student.hpp"
#include "support.hpp"

using namespace sbts;

namespace {

StudentParams static_params(double p) {
    StudentParams params;
    params.variant = StudentVariant::kStatic;
    params.p_success = p;
    return params;
}

StudentParams eps_params(double epsilon, double p_explore) {
    StudentParams params;
    params.variant = StudentVariant::kStaticEpsilon;
    params.epsilon = epsilon;
    params.p_explore = p_explore;
    return params;
}

StudentParams dynamic_params(double epsilon0, long cutoff, double p_explore) {
    StudentParams params;
    params.variant = StudentVariant::kDynamicEpsilon;
    params.epsilon0 = epsilon0;
    params.cutoff = cutoff;
    params.p_explore = p_explore;
    return params;
}

}  // namespace

TEST_CASE("epsilon_at follows the per-variant schedule") {
    CHECK(epsilon_at(static_params(0.7), 0) == 0.0);
    CHECK(epsilon_at(static_params(0.7), 500) == 0.0);

    CHECK(epsilon_at(eps_params(0.3, 0.5), 0) == 0.3);
    CHECK(epsilon_at(eps_params(0.3, 0.5), 99999) == 0.3);

    const StudentParams dynamic = dynamic_params(0.7, 100, 0.5);
    CHECK(epsilon_at(dynamic, 0) == 0.7);
    CHECK(epsilon_at(dynamic, 100) == 0.0);
    CHECK(epsilon_at(dynamic, 250) == 0.0);
    CHECK(epsilon_at(dynamic, 20) == doctest::Approx(0.7 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(epsilon_at(dynamic, 20) == doctest::Approx(0.2575).epsilon(1e-3));
}

TEST_CASE("the dynamic schedule never increases and dies at the cutoff") {
    const StudentParams dynamic = dynamic_params(0.7, 100, 0.5);
    double previous = epsilon_at(dynamic, 0);
    for (long t = 1; t <= 150; ++t) {
        const double current = epsilon_at(dynamic, t);
        CHECK(current <= previous);
        previous = current;
        if (t >= 100) {
            CHECK(current == 0.0);
        }
    }
}

TEST_CASE("a static student passes exactly below its threshold") {
    StudentModel below(static_params(0.7));
    test::FakeRng rng{{test::raw_for(0.69)}};
    CHECK(below.attempt({0, 0}, 0, rng).correct);
    CHECK(rng.next == 1);  // one draw per static attempt

    StudentModel above(static_params(0.7));
    test::FakeRng rng2{{test::raw_for(0.71)}};
    CHECK_FALSE(above.attempt({0, 0}, 0, rng2).correct);
    CHECK(rng2.next == 1);
}

TEST_CASE("exploitation passes exactly when knowledge reaches the level threshold") {
    StudentKnowledge knowledge;
    knowledge.per_topic[0] = 0.35;
    StudentModel student(eps_params(0.3, 0.5), knowledge);

    // Gate draw 0.5 is above epsilon 0.3, so this is the exploitation
    // branch; cell (0,2) requires 0.3 and knowledge 0.35 clears it.
    test::FakeRng rng{{test::raw_for(0.5)}};
    CHECK(student.attempt({0, 2}, 0, rng).correct);
    CHECK(rng.next == 1);  // no second draw under exploitation
    CHECK(student.knowledge().per_topic[0] == doctest::Approx(0.35 + 0.1 * 0.65).epsilon(1e-15));

    StudentModel ignorant(eps_params(0.3, 0.5));
    test::FakeRng rng2{{test::raw_for(0.5)}};
    CHECK_FALSE(ignorant.attempt({1, 0}, 0, rng2).correct);  // 0.0 below the 0.1 floor
    CHECK(ignorant.knowledge().per_topic[1] == 0.0);

    StudentKnowledge boundary;
    boundary.per_topic[3] = 0.3;
    StudentModel exact(eps_params(0.3, 0.5), boundary);
    test::FakeRng rng3{{test::raw_for(0.5)}};
    CHECK(exact.attempt({3, 2}, 0, rng3).correct);  // >= comparison, 0.3 passes 0.3
}

TEST_CASE("exploration consumes a second draw and tests p_explore") {
    StudentModel student(eps_params(0.3, 0.5));
    test::FakeRng rng{{test::raw_for(0.29), test::raw_for(0.49)}};
    CHECK(student.attempt({5, 9}, 0, rng).correct);  // explores, second draw passes
    CHECK(rng.next == 2);
    CHECK(student.knowledge().per_topic[5] == doctest::Approx(0.1).epsilon(1e-15));

    StudentModel student2(eps_params(0.3, 0.5));
    test::FakeRng rng2{{test::raw_for(0.29), test::raw_for(0.51)}};
    CHECK_FALSE(student2.attempt({5, 9}, 0, rng2).correct);
    CHECK(rng2.next == 2);
}

TEST_CASE("the dynamic student stops exploring at the cutoff") {
    StudentKnowledge knowledge;
    knowledge.per_topic[2] = 1.0;
    StudentModel student(dynamic_params(0.7, 100, 0.0), knowledge);

    // Early on a 0.1 gate draw explores (epsilon(10) ~ 0.42) and fails
    // because p_explore is 0; from the cutoff on the same draw exploits and
    // passes on full knowledge. Gate draws are consumed either way.
    test::FakeRng before{{test::raw_for(0.1), test::raw_for(0.9)}};
    CHECK_FALSE(student.attempt({2, 9}, 10, before).correct);
    CHECK(before.next == 2);

    test::FakeRng after{{test::raw_for(0.1)}};
    CHECK(student.attempt({2, 9}, 100, after).correct);
    CHECK(after.next == 1);
}

TEST_CASE("update_knowledge approaches 1 geometrically and ignores failures") {
    StudentKnowledge k;
    const StudentKnowledge gained = update_knowledge(k, {4, 0}, AttemptOutcome{true});
    CHECK(gained.per_topic[4] == doctest::Approx(0.1).epsilon(1e-15));

    StudentKnowledge half;
    half.per_topic[4] = 0.5;
    CHECK(update_knowledge(half, {4, 0}, AttemptOutcome{true}).per_topic[4] ==
          doctest::Approx(0.55).epsilon(1e-15));
    CHECK(update_knowledge(half, {4, 0}, AttemptOutcome{false}).per_topic[4] == 0.5);
    CHECK(update_knowledge(half, {4, 0}, AttemptOutcome{true}, 0.2).per_topic[4] ==
          doctest::Approx(0.6).epsilon(1e-15));

    // Other topics never move.
    CHECK(update_knowledge(half, {4, 0}, AttemptOutcome{true}).per_topic[3] == 0.0);
}

TEST_CASE("knowledge stays inside [0,1] under any answer sequence") {
    Xoshiro256StarStar rng(88);
    StudentKnowledge k;
    for (int step = 0; step < 5000; ++step) {
        const TaskCell cell{static_cast<int>(rng() % kNumTopics),
                            static_cast<int>(rng() % kNumLevels)};
        k = update_knowledge(k, cell, AttemptOutcome{(rng() & 1) == 0});
        for (const double value : k.per_topic) {
            CHECK(value >= 0.0);
            CHECK(value <= 1.0);
        }
    }
    // After thousands of corrects the attempted topics are close to 1.
    StudentKnowledge saturated;
    for (int step = 0; step < 200; ++step) {
        saturated = update_knowledge(saturated, {0, 0}, AttemptOutcome{true});
    }
    CHECK(saturated.per_topic[0] > 0.999);
    CHECK(saturated.per_topic[0] <= 1.0);
}

TEST_CASE("static empirical pass rate matches p_success within 4/sqrt(N)") {
    const int attempts = 100000;
    StudentModel student(static_params(0.7));
    Xoshiro256StarStar rng(20240819);
    long correct = 0;
    for (int i = 0; i < attempts; ++i) {
        if (student.attempt({3, 3}, i, rng).correct) {
            ++correct;
        }
    }
    const double rate = static_cast<double>(correct) / attempts;
    CHECK(std::abs(rate - 0.7) < 4.0 / std::sqrt(static_cast<double>(attempts)));
}
