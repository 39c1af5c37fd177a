#pragma once

#include <cstdint>
#include <vector>

#include "sbts/knowledge_matrix.hpp"
#include "sbts/rng.hpp"

namespace sbts::test {

// Replays a scripted list of raw 64-bit outputs, so a test can pin the
// exact uniform01 values an operation will see.
struct FakeRng {
    using result_type = std::uint64_t;

    std::vector<std::uint64_t> values;
    std::size_t next = 0;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    std::uint64_t operator()() {
        if (next >= values.size()) {
            return 0;  // out-of-script draws read as 0.0; tests assert on `next`
        }
        return values[next++];
    }
};

// Raw output that makes uniform01 return (approximately) u.
inline std::uint64_t raw_for(double u) {
    return static_cast<std::uint64_t>(u * 9007199254740992.0) << 11;  // u * 2^53
}

// Random legal matrix: positive mass everywhere, normalized to 1.
template <class Urbg>
KnowledgeMatrix random_matrix(Urbg& rng) {
    KnowledgeMatrix m;
    double total = 0.0;
    for (double& cell : m.cells) {
        cell = uniform01(rng) + 1e-4;
        total += cell;
    }
    for (double& cell : m.cells) {
        cell /= total;
    }
    return m;
}

// Random legal matrix with mass on only `support` randomly chosen cells.
template <class Urbg>
KnowledgeMatrix sparse_random_matrix(Urbg& rng, int support) {
    KnowledgeMatrix m;
    double total = 0.0;
    for (int k = 0; k < support; ++k) {
        const int i = static_cast<int>(rng() % kNumCells);
        const double w = uniform01(rng) + 1e-4;
        m.cells[static_cast<std::size_t>(i)] += w;
        total += w;
    }
    for (double& cell : m.cells) {
        cell /= total;
    }
    return m;
}

}  // namespace sbts::test
