#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace modalmatrix {

// Stream identifier reported in generated-data summaries. The exact draw
// discipline is part of the output contract:
//   - splitmix64 core: state += 0x9E3779B97F4A7C15, output = mix64(state)
//   - uniform [0,1): top 53 bits of a u64, scaled by 2^-53
//   - standard normal: Box-Muller, always exactly two u64 draws, no caching
//   - substream(seed, i) starts at mix64(seed + (i + 1) * 0x9E3779B97F4A7C15)
inline constexpr const char* kRngAlgorithmId = "splitmix64-boxmuller-v1";

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

// Finalizer of splitmix64 (a bijection on u64).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic per-index seed derivation; used for Monte Carlo replicates,
// k-means restarts and per-observation generator substreams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + kSplitMixGamma * (index + 1));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(derive_seed(seed, index));
    }

    std::uint64_t next_u64() {
        state_ += kSplitMixGamma;
        return mix64(state_);
    }

    // [0, 1)
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal. Consumes exactly two u64 draws so stream positions
    // stay aligned across implementations; u1 is mapped into (0, 1].
    double next_normal() {
        const double u1 =
            static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform integer in [0, n); n must be positive.
    int next_index(int n) {
        const int i = static_cast<int>(next_uniform() * n);
        return i >= n ? n - 1 : i;
    }

private:
    std::uint64_t state_;
};

}  // namespace modalmatrix
