#pragma once

#include <array>
#include <cstdint>

namespace sbts {

// splitmix64 step (Steele/Lea/Flood constants, Vigna's fixed-increment
// variant). Used both as the seed-derivation mixer and to expand a
// 64-bit seed into generator state.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-run seed for (iteration, student). The chain of mix64 steps is part
// of the reproducibility contract: any implementation that uses the same
// derivation and the same generator reproduces identical streams.
inline constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                               std::uint64_t iteration_index,
                                               std::uint64_t student_index) {
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ iteration_index);
    h = mix64(h ^ student_index);
    return h;
}

// xoshiro256** by Blackman & Vigna. State is expanded from the 64-bit
// seed with four successive splitmix64 outputs.
class Xoshiro256StarStar {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256StarStar(std::uint64_t seed) : state_{} {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    constexpr result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

// Uniform double in [0, 1): top 53 bits of one generator output.
template <class Urbg>
inline double uniform01(Urbg& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sbts
