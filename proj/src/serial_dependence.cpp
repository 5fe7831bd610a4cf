#include "ots/serial_dependence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ots/errors.hpp"
#include "ots/marginal_features.hpp"
#include "ots/probabilities.hpp"

namespace ots {

namespace {

double clamp_unit(double v, bool& clamped) {
    if (v > 1.0) {
        clamped = true;
        return 1.0;
    }
    if (v < -1.0) {
        clamped = true;
        return -1.0;
    }
    return v;
}

void require_interior(const Vector& f) {
    for (int i = 0; i < f.size(); ++i)
        if (f[i] <= 0.0 || f[i] >= 1.0)
            throw DegenerateError("cumulative probability f_" + std::to_string(i) + " = " +
                                  std::to_string(f[i]) + " is degenerate (must lie in (0, 1))");
}

void require_same_length(const OrdinalSeries& x, const NumericSeries& z) {
    if (x.length() != z.length())
        throw ValidationError("ordinal and numeric series must have the same length");
}

// Cov over the aligned window {(Y_{t,i}, W_{t-l}) : t = l+1..T}, divisor T-l,
// for every cumulative state i. `w` is indexed like the original series.
Vector windowed_covariances(const OrdinalSeries& series, std::span<const double> w, int lag) {
    const int n = series.n();
    const auto codes = series.codes();
    const std::size_t len = codes.size() - static_cast<std::size_t>(lag);
    Vector cov(n);
    double w_mean = 0.0;
    for (std::size_t k = 0; k < len; ++k) w_mean += w[k];
    w_mean /= static_cast<double>(len);
    for (int i = 0; i < n; ++i) {
        double y_mean = 0.0;
        for (std::size_t k = 0; k < len; ++k) y_mean += codes[k + lag] <= i ? 1.0 : 0.0;
        y_mean /= static_cast<double>(len);
        double s = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            const double y = codes[k + lag] <= i ? 1.0 : 0.0;
            s += (y - y_mean) * (w[k] - w_mean);
        }
        cov[i] = s / static_cast<double>(len);
    }
    return cov;
}

double average_squares(const Vector& v, MixedIndexRange range) {
    const auto n = v.size();
    if (range == MixedIndexRange::Definitional) return v.squaredNorm() / static_cast<double>(n);
    if (n < 2) throw ValidationError("the 1..n-1 index range needs at least three states");
    return v.tail(n - 1).squaredNorm() / static_cast<double>(n - 1);
}

}  // namespace

Eigen::MatrixXi cumulative_binarization(const OrdinalSeries& series) {
    const auto t_len = static_cast<Eigen::Index>(series.length());
    Eigen::MatrixXi y(t_len, series.n());
    for (Eigen::Index t = 0; t < t_len; ++t)
        for (int i = 0; i < series.n(); ++i) y(t, i) = series[static_cast<std::size_t>(t)] <= i ? 1 : 0;
    return y;
}

double lagged_expected_distance(const OrdinalSeries& series, const StateDistance& dist, int lag) {
    check_lag(series, lag, /*allow_zero=*/true);
    if (dist.size() != series.n() + 1)
        throw ValidationError("distance matrix size does not match the series state space");
    if (lag == 0) return 0.0;
    const auto codes = series.codes();
    double sum = 0.0;
    for (std::size_t t = static_cast<std::size_t>(lag); t < codes.size(); ++t)
        sum += dist(codes[t], codes[t - lag]);
    return sum / static_cast<double>(codes.size() - static_cast<std::size_t>(lag));
}

double ordinal_cohens_kappa(const OrdinalSeries& series, const StateDistance& dist, int lag) {
    const double disp = divc_expected_distance(series, dist);
    if (disp <= 0.0) throw DegenerateError("kappa is undefined for a series with zero dispersion");
    return (disp - lagged_expected_distance(series, dist, lag)) / disp;
}

ClampedMatrix cumulative_correlations(const OrdinalSeries& series, int lag) {
    check_lag(series, lag);
    const Vector f = c_marginal_probabilities(series);
    require_interior(f);
    const Matrix fj = c_joint_probabilities(series, lag);
    const int n = series.n();
    ClampedMatrix out{Matrix(n, n), false};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double denom = std::sqrt(f[i] * (1.0 - f[i]) * f[j] * (1.0 - f[j]));
            out.values(i, j) = clamp_unit((fj(i, j) - f[i] * f[j]) / denom, out.clamped);
        }
    return out;
}

double total_c_cor(const OrdinalSeries& series, int lag) {
    const auto psi = cumulative_correlations(series, lag);
    const double n = series.n();
    return psi.values.squaredNorm() / (n * n);
}

ClampedVector mixed_linear_correlations(const OrdinalSeries& series, const NumericSeries& z, int lag) {
    require_same_length(series, z);
    check_lag(series, lag, /*allow_zero=*/true);
    const Vector f = c_marginal_probabilities(series);
    require_interior(f);

    const auto values = z.values();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    if (!(var > 0.0)) throw DegenerateError("numeric series has zero variance");

    const Vector cov = windowed_covariances(series, values, lag);
    ClampedVector out{Vector(series.n()), false};
    for (int i = 0; i < series.n(); ++i)
        out.values[i] = clamp_unit(cov[i] / std::sqrt(f[i] * (1.0 - f[i]) * var), out.clamped);
    return out;
}

double total_mixed_c_cor(const OrdinalSeries& series, const NumericSeries& z, int lag,
                         MixedIndexRange range) {
    return average_squares(mixed_linear_correlations(series, z, lag).values, range);
}

double empirical_quantile(std::span<const double> values, double rho) {
    if (values.empty()) throw ValidationError("quantile of an empty sample");
    if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("probability level must lie in (0, 1)");
    std::vector<double> sorted(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
    return sorted[rank - 1];
}

namespace {

ClampedVector quantile_correlations_sorted(const OrdinalSeries& series, std::span<const double> z,
                                           std::span<const double> sorted, const Vector& f, int lag,
                                           double rho) {
    auto rank = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    const double q = sorted[rank - 1];
    std::vector<double> indicator(z.size());
    std::transform(z.begin(), z.end(), indicator.begin(), [q](double v) { return v <= q ? 1.0 : 0.0; });
    const Vector cov = windowed_covariances(series, indicator, lag);
    ClampedVector out{Vector(series.n()), false};
    const double scale = rho * (1.0 - rho);
    for (int i = 0; i < series.n(); ++i)
        out.values[i] = clamp_unit(cov[i] / std::sqrt(f[i] * (1.0 - f[i]) * scale), out.clamped);
    return out;
}

}  // namespace

ClampedVector mixed_quantile_correlations(const OrdinalSeries& series, const NumericSeries& z,
                                          int lag, double rho) {
    require_same_length(series, z);
    check_lag(series, lag, /*allow_zero=*/true);
    if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("probability level must lie in (0, 1)");
    const Vector f = c_marginal_probabilities(series);
    require_interior(f);
    std::vector<double> sorted(z.values().begin(), z.values().end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_correlations_sorted(series, z.values(), sorted, f, lag, rho);
}

double total_mixed_c_qcor(const OrdinalSeries& series, const NumericSeries& z, int lag, int nodes,
                          MixedIndexRange range) {
    require_same_length(series, z);
    check_lag(series, lag, /*allow_zero=*/true);
    if (nodes < 1) throw ValidationError("quadrature needs at least one node");
    const Vector f = c_marginal_probabilities(series);
    require_interior(f);
    std::vector<double> sorted(z.values().begin(), z.values().end());
    std::sort(sorted.begin(), sorted.end());

    double integral = 0.0;
    for (int k = 1; k <= nodes; ++k) {
        const double rho = (k - 0.5) / nodes;
        const auto psi = quantile_correlations_sorted(series, z.values(), sorted, f, lag, rho);
        integral += average_squares(psi.values, range);
    }
    return integral / nodes;
}

DependenceSummary dependence_summary(const OrdinalSeries& series, const StateDistance& dist, int lag,
                                     const NumericSeries* z) {
    DependenceSummary s;
    s.lag = lag;
    s.kappa = ordinal_cohens_kappa(series, dist, lag);
    s.psi = cumulative_correlations(series, lag);
    s.tcc = s.psi.values.squaredNorm() / (static_cast<double>(series.n()) * series.n());
    if (z) {
        s.tmclc = total_mixed_c_cor(series, *z, lag);
        s.tmcqc = total_mixed_c_qcor(series, *z, lag);
    }
    return s;
}

}  // namespace ots
