// rng.hpp — deterministic random streams for disorder sampling.
//
// SplitMix64 keeps one 64-bit word of state and mixes it on every draw, so a
// stream is fully determined by its seed. Independent streams are derived
// per realization with derive_stream_seed(master, index); derivation is
// order-free, which is what makes the ensemble runner parallelism-invariant.

#pragma once

#include <cstdint>

namespace qwalk {

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 significant bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [-half_width, half_width). half_width = 0 yields exactly 0.
    double next_symmetric(double half_width) {
        return half_width * (2.0 * next_unit() - 1.0);
    }

private:
    std::uint64_t state_;
};

// Hash (master_seed, index) into a seed for an independent stream.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1) + 0x632be59bd9b4e019ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace qwalk
