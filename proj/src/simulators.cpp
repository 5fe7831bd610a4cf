#include "ots/simulators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ots/errors.hpp"
#include "ots/parallel.hpp"
#include "ots/random.hpp"

namespace ots {

std::string_view to_string(GeneratorFamily family) {
    switch (family) {
        case GeneratorFamily::BinomialAR: return "binomial_ar";
        case GeneratorFamily::BinomialINARCH: return "binomial_inarch";
        case GeneratorFamily::OrdinalLogitAR1: return "ordinal_logit_ar1";
    }
    return "unknown";
}

GeneratorFamily parse_generator_family(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "binomial_ar") return GeneratorFamily::BinomialAR;
    if (s == "binomial_inarch") return GeneratorFamily::BinomialINARCH;
    if (s == "ordinal_logit_ar1") return GeneratorFamily::OrdinalLogitAR1;
    throw ValidationError("unknown generator family '" + std::string(name) + "'");
}

GeneratorFamily GeneratorSpec::family() const {
    if (std::holds_alternative<BinomialArParams>(params)) return GeneratorFamily::BinomialAR;
    if (std::holds_alternative<BinomialInarchParams>(params)) return GeneratorFamily::BinomialINARCH;
    return GeneratorFamily::OrdinalLogitAR1;
}

namespace {

void check_common(const GeneratorSpec& spec) {
    if (spec.n < 1) throw ValidationError("n must be at least 1");
    if (spec.length < 1) throw ValidationError("series length must be at least 1");
}

void check(const GeneratorSpec& spec, const BinomialArParams& p) {
    if (!(p.pi > 0.0 && p.pi < 1.0)) throw ValidationError("pi must lie in (0, 1)");
    const double lower = std::max(-p.pi / (1.0 - p.pi), -(1.0 - p.pi) / p.pi);
    if (!(p.rho > lower && p.rho < 1.0))
        throw ValidationError("rho must lie in (" + std::to_string(lower) + ", 1)");
    const double beta = p.pi * (1.0 - p.rho);
    const double alpha = beta + p.rho;
    if (beta < 0.0 || beta > 1.0 || alpha < 0.0 || alpha > 1.0)
        throw ValidationError("thinning probabilities fall outside [0, 1]");
    if (p.weights.empty()) throw ValidationError("AR order must be at least 1");
    double total = 0.0;
    for (double w : p.weights) {
        if (!(w >= 0.0)) throw ValidationError("mixing weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("mixing weights must sum to 1");
    (void)spec;
}

void check(const GeneratorSpec&, const BinomialInarchParams& p) {
    if (!(p.a0 > 0.0)) throw ValidationError("a0 must be positive");
    if (p.a.empty()) throw ValidationError("INARCH order must be at least 1");
    double total = p.a0;
    for (double a : p.a) {
        if (!(a >= 0.0)) throw ValidationError("INARCH coefficients must be nonnegative");
        total += a;
    }
    if (!(total < 1.0)) throw ValidationError("a0 + sum of INARCH coefficients must be below 1");
}

void check(const GeneratorSpec& spec, const OrdinalLogitParams& p) {
    if (static_cast<int>(p.thresholds.size()) != spec.n)
        throw ValidationError("ordinal logit needs exactly n = " + std::to_string(spec.n) + " thresholds");
    for (std::size_t i = 0; i < p.thresholds.size(); ++i) {
        if (!std::isfinite(p.thresholds[i])) throw ValidationError("thresholds must be finite");
        if (i > 0 && !(p.thresholds[i] > p.thresholds[i - 1]))
            throw ValidationError("thresholds must be strictly increasing");
    }
    if (!std::isfinite(p.phi)) throw ValidationError("phi must be finite");
}

template <class Params>
const Params& params_as(const GeneratorSpec& spec, const char* what) {
    const auto* p = std::get_if<Params>(&spec.params);
    if (!p) throw ValidationError(std::string("generator spec does not hold ") + what + " parameters");
    return *p;
}

OrdinalSeries keep_tail(std::vector<int> path, const GeneratorSpec& spec) {
    std::vector<int> codes(path.end() - static_cast<std::ptrdiff_t>(spec.length), path.end());
    return OrdinalSeries(std::move(codes), StateSpace(spec.n + 1));
}

double logistic(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

void validate_generator(const GeneratorSpec& spec) {
    check_common(spec);
    std::visit([&](const auto& p) { check(spec, p); }, spec.params);
}

OrdinalSeries simulate_binomial_ar(const GeneratorSpec& spec) {
    const auto& p = params_as<BinomialArParams>(spec, "binomial AR");
    validate_generator(spec);
    Rng rng(spec.seed);
    const double beta = p.pi * (1.0 - p.rho);
    const double alpha = beta + p.rho;
    const std::size_t order = p.weights.size();
    const std::size_t total = order + kBurnIn + spec.length;
    std::vector<int> c(total);
    for (std::size_t t = 0; t < order; ++t) c[t] = rng.binomial(spec.n, p.pi);
    for (std::size_t t = order; t < total; ++t) {
        const std::size_t k = order == 1 ? 1 : static_cast<std::size_t>(rng.categorical(p.weights)) + 1;
        const int prev = c[t - k];
        c[t] = rng.binomial(prev, alpha) + rng.binomial(spec.n - prev, beta);
    }
    return keep_tail(std::move(c), spec);
}

OrdinalSeries simulate_binomial_inarch(const GeneratorSpec& spec) {
    const auto& p = params_as<BinomialInarchParams>(spec, "binomial INARCH");
    validate_generator(spec);
    Rng rng(spec.seed);
    double feedback = 0.0;
    for (double a : p.a) feedback += a;
    const double mean_pi = p.a0 / (1.0 - feedback);
    const std::size_t order = p.a.size();
    const std::size_t total = order + kBurnIn + spec.length;
    std::vector<int> c(total);
    for (std::size_t t = 0; t < order; ++t) c[t] = rng.binomial(spec.n, mean_pi);
    for (std::size_t t = order; t < total; ++t) {
        double pi_t = p.a0;
        for (std::size_t k = 0; k < order; ++k) pi_t += p.a[k] * c[t - k - 1] / spec.n;
        c[t] = rng.binomial(spec.n, pi_t);
    }
    return keep_tail(std::move(c), spec);
}

OrdinalSeries simulate_ordinal_logit_ar1(const GeneratorSpec& spec) {
    const auto& p = params_as<OrdinalLogitParams>(spec, "ordinal logit");
    validate_generator(spec);
    Rng rng(spec.seed);
    const int n = spec.n;
    auto draw = [&](double shift) {
        const double u = rng.uniform();
        for (int i = 0; i < n; ++i)
            if (u < logistic(p.thresholds[static_cast<std::size_t>(i)] - shift)) return i;
        return n;
    };
    const std::size_t total = 1 + kBurnIn + spec.length;
    std::vector<int> c(total);
    c[0] = draw(0.0);
    for (std::size_t t = 1; t < total; ++t) c[t] = draw(p.phi * (2.0 * c[t - 1] / n - 1.0));
    return keep_tail(std::move(c), spec);
}

OrdinalSeries simulate(const GeneratorSpec& spec) {
    switch (spec.family()) {
        case GeneratorFamily::BinomialAR: return simulate_binomial_ar(spec);
        case GeneratorFamily::BinomialINARCH: return simulate_binomial_inarch(spec);
        case GeneratorFamily::OrdinalLogitAR1: return simulate_ordinal_logit_ar1(spec);
    }
    throw ValidationError("unknown generator family");
}

OtsDataset make_benchmark_dataset(const BenchmarkSpec& spec, std::uint64_t seed, int threads) {
    if (spec.groups.empty()) throw ValidationError("benchmark needs at least one group");
    if (spec.per_group < 1) throw ValidationError("per_group must be at least 1");
    const int n = spec.groups.front().n;
    for (const auto& g : spec.groups) {
        if (g.n != n) throw ValidationError("all benchmark groups must share n");
        validate_generator(g);
    }
    const auto per = static_cast<std::size_t>(spec.per_group);
    const std::size_t count = spec.groups.size() * per;
    std::vector<std::optional<OrdinalSeries>> slots(count);
    parallel_for(count, threads, [&](std::size_t idx) {
        const std::size_t g = idx / per, j = idx % per;
        GeneratorSpec s = spec.groups[g];
        s.seed = derive_seed(seed, {g, j});
        slots[idx] = simulate(s);
    });
    std::vector<OrdinalSeries> series;
    std::vector<int> labels;
    series.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        series.push_back(std::move(*slots[idx]));
        labels.push_back(static_cast<int>(idx / per) + 1);
    }
    return OtsDataset("benchmark", StateSpace(n + 1), std::move(series), std::move(labels));
}

}  // namespace ots
