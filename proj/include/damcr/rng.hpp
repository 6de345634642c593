#pragma once

// Seeded random streams. Every consumer (topology, jammer, channel updates,
// traffic, per-packet transmissions) draws from its own stream derived from
// the trial seed, so changing how many draws one consumer makes never shifts
// another consumer's sequence.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace damcr {

enum class StreamTag : std::uint64_t {
    Topology = 1,
    Jammer = 2,
    Channel = 3,
    Traffic = 4,
    Transmission = 5,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(base);
    for (auto p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ull));
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    Rng(std::uint64_t base, StreamTag tag, std::initializer_list<std::uint64_t> path = {})
        : engine_(derive(base, tag, path)) {}

    /// Uniform in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }
    /// Exponential with mean 1.
    double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    static std::uint64_t derive(std::uint64_t base, StreamTag tag,
                                std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = derive_seed(base, {static_cast<std::uint64_t>(tag)});
        for (auto p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ull));
        return h;
    }

    std::mt19937_64 engine_;
};

}  // namespace damcr
