#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace ots {

/// SplitMix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;
/// Deterministic sub-seed for (seed, a, b, ...). Order matters.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

/// Random source whose draws are specified bit for bit: the engine is
/// mt19937_64 and every transformation is written out here instead of going
/// through the implementation-defined std:: distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }
    /// Sum of `trials` independent Bernoulli(p) draws.
    int binomial(int trials, double p);
    /// Standard normal (Box-Muller, one value per call).
    double normal();
    /// Index drawn from (unnormalized, nonnegative) weights.
    int categorical(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
};

}  // namespace ots
