#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace specfid {

// Counter-style generator built on the splitmix64 finalizer. Every sampled
// artifact in the pipeline flows from one of these, seeded from the master
// seed, so identical seeds give bit-identical streams on every platform.
// std::mt19937 + std::*_distribution is deliberately avoided: distribution
// output is implementation-defined and would break run reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 significant bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound); bound > 0. Rejection keeps it unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool bernoulli(double p) { return next_unit() < p; }

    // Index draw proportional to non-negative weights (sum must be > 0).
    std::size_t categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = next_unit() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.size() - 1;
    }

    // Deterministic sub-seed derivation, e.g. train seed for iteration k
    // = derive(master_seed, k).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t n) {
        std::uint64_t z = seed ^ (n + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

}  // namespace specfid
