#pragma once

#include <cstdint>
#include <random>

namespace selfopt {

// Deterministic random source. All sampling goes through the explicit methods
// below rather than std::xxx_distribution, whose output is implementation
// defined; this keeps trajectories byte-identical for a fixed seed.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Rejection-free modulo is fine here: n is tiny
    // (alphabet sizes), the bias is < 2^-59.
    std::uint64_t below(std::uint64_t n) {
        return engine_() % n;
    }

    bool bernoulli(double p) {
        return uniform01() < p;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer, used to derive independent child seeds for
// (seed, stream index) pairs so that parallel cells and seeds stay decoupled.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace selfopt
