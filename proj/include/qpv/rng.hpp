#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "qpv/common.hpp"

namespace qpv {

/// Deterministic PRNG for one simulation run. A single instance is threaded
/// through every measurement so that identical seeds replay identical
/// transcripts, bit for bit, on any platform (mt19937_64 is fully specified
/// by the standard; no std::*_distribution is used because their output is
/// implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    int bit() { return static_cast<int>(gen_() & 1u); }

    /// Uniform integer in [0, n). Rejection sampling keeps it exactly uniform.
    int uniform_int(int n) {
        if (n <= 0) throw internal_error("Rng::uniform_int: n must be positive");
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return static_cast<int>(x % un);
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Samples an index by weight. Weights must be nonnegative; a sampled
    /// branch of (near) zero weight is an invariant breach.
    int pick(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) throw internal_error("Rng::pick: no probability mass");
        const double u = uniform() * total;
        double cum = 0.0;
        int last_live = -1;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] > 1e-12) last_live = static_cast<int>(i);
            cum += weights[i];
            if (u < cum) {
                if (weights[i] <= 1e-12)
                    throw internal_error("Rng::pick: sampled zero-probability branch");
                return static_cast<int>(i);
            }
        }
        if (last_live < 0) throw internal_error("Rng::pick: no live branch");
        return last_live;
    }

private:
    std::mt19937_64 gen_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Stable per-trial seed derivation: trial i of a batch seeded with `master`
/// always gets the same seed, independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9E3779B97F4A7C15ull * (index + 1));
}

} // namespace qpv
