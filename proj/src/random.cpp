#include "ots/random.hpp"

#include <cmath>
#include <numbers>

#include "ots/errors.hpp"

namespace ots {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix_seed(seed);
    for (auto p : path) h = mix_seed(h ^ mix_seed(p + 0x632be59bd9b4e019ULL));
    return h;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw ValidationError("empty range");
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

int Rng::binomial(int trials, double p) {
    int k = 0;
    for (int i = 0; i < trials; ++i) k += bernoulli(p) ? 1 : 0;
    return k;
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw ValidationError("categorical weights must have a positive sum");
    const double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    // Rounding can leave u just above the last partial sum.
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return static_cast<int>(i);
    return 0;
}

}  // namespace ots
