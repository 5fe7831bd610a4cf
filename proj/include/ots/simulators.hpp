#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "ots/core.hpp"

namespace ots {

enum class GeneratorFamily { BinomialAR, BinomialINARCH, OrdinalLogitAR1 };

std::string_view to_string(GeneratorFamily family);
/// Accepts "binomial_ar", "binomial_inarch", "ordinal_logit_ar1".
GeneratorFamily parse_generator_family(std::string_view name);

/// Binomial AR(p) with marginal parameter pi and thinning correlation rho.
/// weights[k] is the probability that step t feeds back on C_{t-k-1}.
struct BinomialArParams {
    double pi = 0.5;
    double rho = 0.0;
    std::vector<double> weights{1.0};
};

/// pi_t = a0 + sum_k a[k] * C_{t-k-1} / n.
struct BinomialInarchParams {
    double a0 = 0.5;
    std::vector<double> a{0.0};
};

/// P(C_t <= i | C_{t-1} = c) = logistic(eta_i - phi * (2c/n - 1)).
struct OrdinalLogitParams {
    std::vector<double> thresholds;  ///< eta_0 < ... < eta_{n-1}
    double phi = 0.0;
};

using GeneratorParams = std::variant<BinomialArParams, BinomialInarchParams, OrdinalLogitParams>;

struct GeneratorSpec {
    int n = 5;
    GeneratorParams params;
    std::size_t length = 600;
    std::uint64_t seed = 1;

    GeneratorFamily family() const;
};

inline constexpr int kBurnIn = 500;

/// Throws ValidationError when the parameters violate the family's
/// constraints.
void validate_generator(const GeneratorSpec& spec);

OrdinalSeries simulate_binomial_ar(const GeneratorSpec& spec);
OrdinalSeries simulate_binomial_inarch(const GeneratorSpec& spec);
OrdinalSeries simulate_ordinal_logit_ar1(const GeneratorSpec& spec);
/// Dispatches on the parameter type.
OrdinalSeries simulate(const GeneratorSpec& spec);

struct BenchmarkSpec {
    std::vector<GeneratorSpec> groups;  ///< seeds are ignored
    int per_group = 20;
};

/// per_group series from each group, group g labelled g + 1. Series j of
/// group g uses the seed derive_seed(seed, {g, j}).
OtsDataset make_benchmark_dataset(const BenchmarkSpec& spec, std::uint64_t seed, int threads = 1);

}  // namespace ots
