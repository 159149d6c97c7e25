#pragma once

#include <cstdint>
#include <random>

namespace survival {

using Rng = std::mt19937_64;

/// Independent stream families derived from one master seed.
enum class StreamKind : std::uint32_t {
    Training = 1,
    Evaluation = 2,
    Baseline = 3,
    Test = 4,
};

/// Seeds a generator for (master_seed, kind, index, sub_index). The mapping
/// is fixed, so a run is bit-reproducible from its master seed alone.
inline Rng derive_stream(std::uint64_t master_seed, StreamKind kind, std::uint64_t index,
                         std::uint64_t sub_index = 0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
        static_cast<std::uint32_t>(kind),
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(sub_index), static_cast<std::uint32_t>(sub_index >> 32),
    };
    return Rng(seq);
}

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Uniform integer in [0, n).
inline int uniform_index(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

}  // namespace survival
