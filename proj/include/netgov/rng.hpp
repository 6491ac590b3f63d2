#pragma once

#include <cstdint>
#include <random>

namespace netgov {

/// Deterministic RNG used everywhere in the project.
///
/// mt19937_64 is fully specified by the standard, and all value mappings
/// (uniform doubles, bounded ints) are implemented here instead of going
/// through std distributions, whose output is implementation-defined. Same
/// seed, same stream of draws, on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, bound), bound >= 1. Unbiased via rejection.
    int uniform_int(int bound) {
        return static_cast<int>(uniform_u64(static_cast<std::uint64_t>(bound)));
    }

    std::uint64_t uniform_u64(std::uint64_t bound) {
        // Accept r in [0, 2^64 - rem) where rem = 2^64 mod bound.
        std::uint64_t rem = (UINT64_MAX % bound) + 1;
        if (rem == bound) rem = 0;
        const std::uint64_t zone = UINT64_MAX - rem;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r > zone);
        return r % bound;
    }

    /// splitmix64 finalizer; decorrelates small consecutive seeds.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Counter-based seed derivation: child seed for (stream, index) under a
    /// master seed. Lets any episode be reproduced in isolation.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream,
                                std::uint64_t index) {
        return mix(mix(master ^ mix(stream)) ^ index);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace netgov
