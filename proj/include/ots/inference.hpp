#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ots/core.hpp"

namespace ots {

enum class InferenceMode { Iid, Temporal };
enum class MarginalFeature { Dispersion, Asymmetry, Skewness };
/// Reference law of TestResult::statistic under the null.
enum class ReferenceDistribution { Normal, ChiSquared };

std::string_view to_string(InferenceMode mode);
std::string_view to_string(MarginalFeature feature);
MarginalFeature parse_marginal_feature(std::string_view name);

struct KappaNullDistribution {
    double mean = 0.0;
    double variance = 0.0;
};

/// Normal approximation of the Block-distance kappa estimator under serial
/// independence: mean -1/T, variance
/// 4 / (T disp^2) * sum_{k,l} (f_min(k,l) - f_k f_l)^2. Same for every lag.
KappaNullDistribution kappa_null_distribution(const OrdinalSeries& series);
/// As above; throws UnsupportedDistanceError unless `dist` is Block.
KappaNullDistribution kappa_null_distribution(const OrdinalSeries& series, const StateDistance& dist);

struct CriticalPair {
    double lower = 0.0;
    double upper = 0.0;
};

/// -1/T -/+ z_{1-alpha/2} * sd, alpha in (0, 1].
CriticalPair kappa_critical_values(const OrdinalSeries& series, double alpha);

struct KappaDiagnostics {
    int max_lag = 0;
    std::vector<double> kappas;  ///< lags 1..max_lag
    CriticalPair critical;
    std::vector<double> p_values;
    double alpha = 0.05;
    KappaNullDistribution null;
};

/// Block-distance kappa at lags 1..max_lag with two-sided serial independence
/// p-values.
KappaDiagnostics kappa_diagnostics(const OrdinalSeries& series, int max_lag = 10, double alpha = 0.05);

/// Default Bartlett bandwidth: floor(T^(1/3)).
int default_bandwidth(std::size_t length);

/// HAC long-run covariance of the one-hot category indicators, Bartlett
/// weights 1 - h/(H+1), symmetrized and projected onto the PSD cone.
Matrix long_run_covariance(const OrdinalSeries& series, std::optional<int> bandwidth = std::nullopt);

struct InferenceOptions {
    std::optional<int> bandwidth;  ///< temporal mode only
    /// When > 0, also report a circular block bootstrap standard error.
    int bootstrap_resamples = 0;
    std::uint64_t bootstrap_seed = 1;
};

struct TestResult {
    double estimate = 0.0;
    double statistic = 0.0;
    double p_value = 1.0;
    double critical_value = 0.0;
    double alpha = 0.05;
    double h0_value = 0.0;
    /// Delta-method standard error (NaN for the chi-squared asymmetry test).
    double standard_error = 0.0;
    InferenceMode mode = InferenceMode::Temporal;
    ReferenceDistribution reference = ReferenceDistribution::Normal;
    int degrees_of_freedom = 0;
    std::optional<double> bootstrap_standard_error;
    std::vector<std::string> warnings;

    bool rejects() const { return p_value < alpha; }
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    double estimate = 0.0;
};

/// Two-sided test of H0: feature == h0.
///
/// Dispersion and skewness use the delta method over the marginal
/// probabilities, with Cov(p_hat) = (diag(p) - p p^T)/T in iid mode and the
/// HAC long-run covariance over T in temporal mode; the statistic is
/// standard normal under H0.
///
/// Asymmetry is a quadratic form in the antisymmetric part of p that has a
/// zero gradient at every symmetric distribution, so the delta method breaks
/// down exactly where the null of symmetry lives. For centrosymmetric
/// distances with PSD (J-I)D it is tested by the minimum Mahalanobis
/// distance from the estimated antisymmetric component to the level set
/// {asym = h0}: chi-squared with 1 df for h0 > 0 and with rank-many df at
/// h0 = 0. Other distances fall back to the delta method with a warning.
TestResult test_marginal_feature(const OrdinalSeries& series, const StateDistance& dist,
                                 MarginalFeature feature, double h0, double alpha,
                                 InferenceMode mode, const InferenceOptions& options = {});

/// Interval that inverts test_marginal_feature: estimate +/- z * se for
/// dispersion and skewness, the convex hull of the accepted h0 values for
/// asymmetry.
ConfidenceInterval ci_marginal_feature(const OrdinalSeries& series, const StateDistance& dist,
                                       MarginalFeature feature, double level, InferenceMode mode,
                                       const InferenceOptions& options = {});

/// Circular block bootstrap standard error of the feature estimate. Block
/// length defaults to ceil(T^(1/3)).
double bootstrap_standard_error(const OrdinalSeries& series, const StateDistance& dist,
                                MarginalFeature feature, int resamples, std::uint64_t seed,
                                std::optional<int> block_length = std::nullopt);

/// Holm step-down adjustment; output in the input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

}  // namespace ots
