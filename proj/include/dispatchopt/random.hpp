#pragma once

#include <cstdint>
#include <random>
#include <variant>

namespace dispatchopt {

/// Mixes a base seed with a stream id into an independent 64-bit seed
/// (splitmix64 finalizer applied twice).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

struct Exponential {
    double rate = 1.0;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
};

using Distribution = std::variant<Exponential, Uniform>;

/// Deterministic stream of variates. Transforms are written out here rather than
/// taken from <random> distributions so sequences match across standard libraries.
class RandomStream {
public:
    RandomStream() : RandomStream(0) {}
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    RandomStream(std::uint64_t base, std::uint64_t stream) : engine_(derive_seed(base, stream)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);
    double exponential(double rate);
    double normal(double mean, double sigma);
    /// Uniform integer on [lo, hi], inclusive, without modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    bool coin() { return (engine_() >> 63) != 0; }
    std::uint64_t next_u64() { return engine_(); }

    /// Throws std::invalid_argument for rate <= 0 or lo > hi.
    double draw(const Distribution& distribution);

private:
    std::mt19937_64 engine_;
};

}  // namespace dispatchopt
