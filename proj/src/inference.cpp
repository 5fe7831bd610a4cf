#include "ots/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ots/distributions.hpp"
#include "ots/errors.hpp"
#include "ots/marginal_features.hpp"
#include "ots/probabilities.hpp"
#include "ots/random.hpp"
#include "ots/serial_dependence.hpp"

namespace ots {

std::string_view to_string(InferenceMode mode) {
    return mode == InferenceMode::Iid ? "iid" : "temporal";
}

std::string_view to_string(MarginalFeature feature) {
    switch (feature) {
        case MarginalFeature::Dispersion: return "dispersion";
        case MarginalFeature::Asymmetry: return "asymmetry";
        case MarginalFeature::Skewness: return "skewness";
    }
    return "?";
}

MarginalFeature parse_marginal_feature(std::string_view name) {
    if (name == "dispersion") return MarginalFeature::Dispersion;
    if (name == "asymmetry") return MarginalFeature::Asymmetry;
    if (name == "skewness") return MarginalFeature::Skewness;
    throw ValidationError("unknown feature '" + std::string(name) +
                          "' (expected dispersion, asymmetry or skewness)");
}

// ---------------------------------------------------------------------------
// kappa under serial independence

KappaNullDistribution kappa_null_distribution(const OrdinalSeries& series, const StateDistance& dist) {
    if (dist.kind() != DistanceKind::Block)
        throw UnsupportedDistanceError("the kappa null distribution is only available for the Block distance");
    return kappa_null_distribution(series);
}

KappaNullDistribution kappa_null_distribution(const OrdinalSeries& series) {
    const auto block = build_state_distance(DistanceKind::Block, series.state_space());
    const double disp = divc_expected_distance(series, block);
    if (disp <= 0.0) throw DegenerateError("kappa is undefined for a series with zero dispersion");
    const Vector f = c_marginal_probabilities(series);
    double sum = 0.0;
    for (int k = 0; k < f.size(); ++k)
        for (int l = 0; l < f.size(); ++l) {
            const double term = f[std::min(k, l)] - f[k] * f[l];
            sum += term * term;
        }
    const double t = static_cast<double>(series.length());
    return {-1.0 / t, 4.0 * sum / (t * disp * disp)};
}

CriticalPair kappa_critical_values(const OrdinalSeries& series, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
    const auto null = kappa_null_distribution(series);
    const double z = alpha == 1.0 ? 0.0 : normal_quantile(1.0 - alpha / 2.0);
    const double half = z * std::sqrt(null.variance);
    return {null.mean - half, null.mean + half};
}

KappaDiagnostics kappa_diagnostics(const OrdinalSeries& series, int max_lag, double alpha) {
    if (max_lag < 1) throw ValidationError("max lag must be at least 1");
    check_lag(series, max_lag);
    KappaDiagnostics out;
    out.max_lag = max_lag;
    out.alpha = alpha;
    out.null = kappa_null_distribution(series);
    out.critical = kappa_critical_values(series, alpha);
    const auto block = build_state_distance(DistanceKind::Block, series.state_space());
    const double sd = std::sqrt(out.null.variance);
    for (int l = 1; l <= max_lag; ++l) {
        const double k = ordinal_cohens_kappa(series, block, l);
        out.kappas.push_back(k);
        out.p_values.push_back(two_sided_p_value((k - out.null.mean) / sd));
    }
    return out;
}

// ---------------------------------------------------------------------------
// long-run covariance

int default_bandwidth(std::size_t length) {
    int h = 0;
    while (static_cast<std::size_t>(h + 1) * (h + 1) * (h + 1) <= length) ++h;
    return h;
}

Matrix long_run_covariance(const OrdinalSeries& series, std::optional<int> bandwidth) {
    const auto codes = series.codes();
    const std::size_t len = codes.size();
    if (len < 4) throw ValidationError("long-run covariance needs at least 4 observations");
    const int h_max = std::min<int>(bandwidth.value_or(default_bandwidth(len)), static_cast<int>(len) - 1);
    if (h_max < 0) throw ValidationError("bandwidth must be nonnegative");

    const int m = series.n() + 1;
    const Vector p = marginal_probabilities(series);
    Matrix centered(static_cast<Eigen::Index>(len), m);
    for (std::size_t t = 0; t < len; ++t) {
        centered.row(static_cast<Eigen::Index>(t)) = -p.transpose();
        centered(static_cast<Eigen::Index>(t), codes[t]) += 1.0;
    }
    const double t_len = static_cast<double>(len);
    Matrix sigma = centered.transpose() * centered / t_len;
    for (int h = 1; h <= h_max; ++h) {
        const auto rows = static_cast<Eigen::Index>(len) - h;
        const Matrix gamma = centered.bottomRows(rows).transpose() * centered.topRows(rows) / t_len;
        const double w = 1.0 - static_cast<double>(h) / (h_max + 1.0);
        sigma += w * (gamma + gamma.transpose());
    }
    sigma = 0.5 * (sigma + sigma.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
    const Vector ev = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

// ---------------------------------------------------------------------------
// marginal feature tests

namespace {

double feature_estimate(const OrdinalSeries& series, const StateDistance& dist, MarginalFeature f) {
    switch (f) {
        case MarginalFeature::Dispersion: return ordinal_dispersion_2(series, dist);
        case MarginalFeature::Asymmetry: return ordinal_asymmetry(series, dist);
        case MarginalFeature::Skewness: return ordinal_skewness(series, dist);
    }
    return 0.0;
}

Matrix counteridentity(int m) { return Matrix::Identity(m, m).rowwise().reverse(); }

Vector feature_gradient(const Vector& p, const StateDistance& dist, MarginalFeature f) {
    const Matrix& d = dist.matrix();
    const int m = static_cast<int>(p.size());
    switch (f) {
        case MarginalFeature::Dispersion: return 2.0 * d * p;
        case MarginalFeature::Asymmetry: {
            const Matrix j = counteridentity(m);
            return (d * j + j * d) * p - 2.0 * d * p;
        }
        case MarginalFeature::Skewness: {
            Vector c(m);
            for (int i = 0; i < m; ++i) c[i] = d(i, m - 1) - d(i, 0);
            return c;
        }
    }
    return Vector::Zero(m);
}

// Covariance matrix of p_hat (already divided by T).
Matrix probability_covariance(const OrdinalSeries& series, InferenceMode mode,
                              const InferenceOptions& options) {
    const double t = static_cast<double>(series.length());
    if (mode == InferenceMode::Temporal) return long_run_covariance(series, options.bandwidth) / t;
    const Vector p = marginal_probabilities(series);
    Matrix s = -p * p.transpose();
    s.diagonal() += p;
    return s / t;
}

double delta_standard_error(const OrdinalSeries& series, const StateDistance& dist, MarginalFeature f,
                            const Matrix& cov) {
    const Vector grad = feature_gradient(marginal_probabilities(series), dist, f);
    const double var = grad.dot(cov * grad);
    const double se = std::sqrt(std::max(var, 0.0));
    if (!(se > 1e-15))
        throw DegenerateError("standard error of the " + std::string(to_string(f)) +
                              " estimate is zero for this series");
    return se;
}

// Asymmetry as a quadratic form u^T Q u in the antisymmetric coordinates
// u = B^T p, whitened so that the estimate's covariance is the identity and
// rotated so that Q is diagonal: asym = sum_k mu_k y_k^2.
class AsymmetryWald {
public:
    static std::optional<AsymmetryWald> build(const Vector& p, const StateDistance& dist,
                                              const Matrix& cov) {
        if (!dist.centrosymmetric()) return std::nullopt;
        const int m = static_cast<int>(p.size());
        const int q = m / 2;
        Matrix basis = Matrix::Zero(m, q);
        for (int k = 0; k < q; ++k) {
            basis(k, k) = std::sqrt(0.5);
            basis(m - 1 - k, k) = -std::sqrt(0.5);
        }
        const Vector u_hat = basis.transpose() * p;
        const Matrix quad = -2.0 * basis.transpose() * dist.matrix() * basis;
        const Matrix c = basis.transpose() * cov * basis;

        Eigen::SelfAdjointEigenSolver<Matrix> ce(0.5 * (c + c.transpose()));
        const Vector& lam = ce.eigenvalues();
        const double lam_max = lam.maxCoeff();
        if (!(lam_max > 0.0)) return std::nullopt;
        std::vector<int> keep;
        double null_part = 0.0;
        for (int k = 0; k < q; ++k) {
            const double coord = ce.eigenvectors().col(k).dot(u_hat);
            if (lam[k] > 1e-12 * lam_max)
                keep.push_back(k);
            else
                null_part += coord * coord;
        }
        // A fixed, nonzero antisymmetric component would turn the level set
        // into a shifted quadric; leave that case to the delta method.
        if (null_part > 1e-24) return std::nullopt;

        const int r = static_cast<int>(keep.size());
        Matrix root(q, r);  // U_k Lambda_k^{1/2}
        Vector z_hat(r);
        for (int a = 0; a < r; ++a) {
            const int k = keep[static_cast<std::size_t>(a)];
            root.col(a) = ce.eigenvectors().col(k) * std::sqrt(lam[k]);
            z_hat[a] = ce.eigenvectors().col(k).dot(u_hat) / std::sqrt(lam[k]);
        }
        const Matrix qw = root.transpose() * quad * root;
        Eigen::SelfAdjointEigenSolver<Matrix> qe(0.5 * (qw + qw.transpose()));
        Vector mu = qe.eigenvalues();
        const double mu_scale = mu.cwiseAbs().maxCoeff();
        if (!(mu_scale > 0.0)) return std::nullopt;
        if (mu.minCoeff() < -1e-9 * mu_scale) return std::nullopt;  // (J-I)D not PSD

        AsymmetryWald w;
        w.y_ = qe.eigenvectors().transpose() * z_hat;
        w.mu_ = Vector(r);
        w.rank_ = 0;
        for (int a = 0; a < r; ++a) {
            w.mu_[a] = mu[a] > 1e-12 * mu_scale ? mu[a] : 0.0;
            if (w.mu_[a] > 0.0) ++w.rank_;
        }
        w.mu_max_ = w.mu_.maxCoeff();
        return w;
    }

    double estimate() const { return phi(0.0); }
    int rank() const { return rank_; }

    // Minimum squared Mahalanobis distance to {asym = c}.
    double statistic(double c) const {
        const double g = estimate();
        if (c < 0.0) return std::numeric_limits<double>::infinity();
        if (c == g) return 0.0;
        if (c == 0.0) return distance_to_zero();
        if (c < g) {
            const double lam = solve_increasing(c);
            return distance(lam);
        }
        // c > g: lambda in (-1/mu_max, 0).
        const double lo = -1.0 / mu_max_;
        const double phi_edge = phi_limit_at_pole();
        if (c < phi_edge) return distance(solve_on_pole_side([&](double l) { return phi(l) - c; }));
        // Every y_k on the top eigenspace is zero: sit on the pole and move
        // along that eigenspace for the remainder.
        return distance(lo) + (c - phi_edge) / mu_max_;
    }

    int degrees_of_freedom(double c) const { return c == 0.0 ? rank_ : 1; }

    double p_value(double c) const {
        const double s = statistic(c);
        if (std::isinf(s)) return 0.0;
        return 1.0 - chi_squared_cdf(s, degrees_of_freedom(c));
    }

    ConfidenceInterval interval(double level) const {
        const double q1 = chi_squared_quantile(level, 1.0);
        const double q0 = chi_squared_quantile(level, rank_);
        ConfidenceInterval ci;
        ci.level = level;
        ci.estimate = estimate();

        // Upper end: distance grows monotonically as lambda -> -1/mu_max.
        const double edge = distance_limit_at_pole();
        if (edge > q1) {
            ci.upper = phi(solve_on_pole_side([&](double l) { return distance(l) - q1; }));
        } else {
            ci.upper = phi_limit_at_pole() + (q1 - edge) * mu_max_;
        }

        // Lower end.
        const double at_zero = distance_to_zero();
        if (at_zero <= q1 || at_zero <= q0) {
            ci.lower = 0.0;
        } else {
            double hi = 1.0;
            while (distance(hi) < q1) hi *= 2.0;
            double lo = 0.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (distance(mid) < q1 ? lo : hi) = mid;
            }
            ci.lower = phi(0.5 * (lo + hi));
        }
        ci.lower = std::min(ci.lower, ci.estimate);
        ci.upper = std::max(ci.upper, ci.estimate);
        return ci;
    }

private:
    double phi(double lam) const {
        double s = 0.0;
        for (int k = 0; k < mu_.size(); ++k) {
            const double den = 1.0 + lam * mu_[k];
            s += mu_[k] * y_[k] * y_[k] / (den * den);
        }
        return s;
    }

    double distance(double lam) const {
        double s = 0.0;
        for (int k = 0; k < mu_.size(); ++k) {
            const double shrink = lam * mu_[k] / (1.0 + lam * mu_[k]);
            s += y_[k] * y_[k] * shrink * shrink;
        }
        return s;
    }

    double distance_to_zero() const {
        double s = 0.0;
        for (int k = 0; k < mu_.size(); ++k)
            if (mu_[k] > 0.0) s += y_[k] * y_[k];
        return s;
    }

    bool top_space_empty() const {
        for (int k = 0; k < mu_.size(); ++k)
            if (mu_[k] >= mu_max_ * (1.0 - 1e-12) && y_[k] != 0.0) return false;
        return true;
    }

    // Sums over the non-top eigenspace at lambda = -1/mu_max; +inf unless the
    // estimate has no component on the top eigenspace.
    double phi_limit_at_pole() const {
        if (!top_space_empty()) return std::numeric_limits<double>::infinity();
        double s = 0.0;
        const double lam = -1.0 / mu_max_;
        for (int k = 0; k < mu_.size(); ++k) {
            if (mu_[k] >= mu_max_ * (1.0 - 1e-12)) continue;
            const double den = 1.0 + lam * mu_[k];
            s += mu_[k] * y_[k] * y_[k] / (den * den);
        }
        return s;
    }

    double distance_limit_at_pole() const {
        if (!top_space_empty()) return std::numeric_limits<double>::infinity();
        double s = 0.0;
        const double lam = -1.0 / mu_max_;
        for (int k = 0; k < mu_.size(); ++k) {
            if (mu_[k] >= mu_max_ * (1.0 - 1e-12)) continue;
            const double shrink = lam * mu_[k] / (1.0 + lam * mu_[k]);
            s += y_[k] * y_[k] * shrink * shrink;
        }
        return s;
    }

    // phi is decreasing on (0, inf); find phi(lambda) = c for 0 < c < phi(0).
    double solve_increasing(double c) const {
        double hi = 1.0;
        while (phi(hi) > c) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (phi(mid) > c ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // Root of an increasing function of s in (0, 1), lambda = -s / mu_max.
    template <class F>
    double solve_on_pole_side(F&& f) const {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(-mid / mu_max_) < 0.0 ? lo : hi) = mid;
        }
        return -0.5 * (lo + hi) / mu_max_;
    }

    Vector y_;
    Vector mu_;
    double mu_max_ = 0.0;
    int rank_ = 0;
};

struct PreparedTest {
    double estimate = 0.0;
    Matrix cov;
    std::optional<AsymmetryWald> wald;
    std::vector<std::string> warnings;
};

PreparedTest prepare(const OrdinalSeries& series, const StateDistance& dist, MarginalFeature feature,
                     InferenceMode mode, const InferenceOptions& options) {
    if (dist.size() != series.n() + 1)
        throw ValidationError("distance matrix size does not match the series state space");
    PreparedTest prep;
    prep.estimate = feature_estimate(series, dist, feature);
    prep.cov = probability_covariance(series, mode, options);
    prep.warnings = distance_assumption_warnings(dist);
    if (feature == MarginalFeature::Asymmetry) {
        prep.wald = AsymmetryWald::build(marginal_probabilities(series), dist, prep.cov);
        if (!prep.wald) prep.warnings.emplace_back("asymmetry inference fell back to the delta method");
    }
    return prep;
}

}  // namespace

TestResult test_marginal_feature(const OrdinalSeries& series, const StateDistance& dist,
                                 MarginalFeature feature, double h0, double alpha, InferenceMode mode,
                                 const InferenceOptions& options) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    auto prep = prepare(series, dist, feature, mode, options);
    TestResult r;
    r.estimate = prep.estimate;
    r.alpha = alpha;
    r.h0_value = h0;
    r.mode = mode;
    r.warnings = std::move(prep.warnings);
    if (prep.wald) {
        r.reference = ReferenceDistribution::ChiSquared;
        r.degrees_of_freedom = prep.wald->degrees_of_freedom(h0);
        r.statistic = prep.wald->statistic(h0);
        r.p_value = prep.wald->p_value(h0);
        r.critical_value = chi_squared_quantile(1.0 - alpha, r.degrees_of_freedom);
        r.standard_error = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.standard_error = delta_standard_error(series, dist, feature, prep.cov);
        r.reference = ReferenceDistribution::Normal;
        r.statistic = (prep.estimate - h0) / r.standard_error;
        r.p_value = two_sided_p_value(r.statistic);
        r.critical_value = normal_quantile(1.0 - alpha / 2.0);
    }
    if (options.bootstrap_resamples > 0)
        r.bootstrap_standard_error = bootstrap_standard_error(series, dist, feature, options.bootstrap_resamples,
                                                              options.bootstrap_seed);
    return r;
}

ConfidenceInterval ci_marginal_feature(const OrdinalSeries& series, const StateDistance& dist,
                                       MarginalFeature feature, double level, InferenceMode mode,
                                       const InferenceOptions& options) {
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must lie in (0, 1)");
    auto prep = prepare(series, dist, feature, mode, options);
    if (prep.wald) return prep.wald->interval(level);
    const double se = delta_standard_error(series, dist, feature, prep.cov);
    const double z = normal_quantile(0.5 * (1.0 + level));
    return {prep.estimate - z * se, prep.estimate + z * se, level, prep.estimate};
}

double bootstrap_standard_error(const OrdinalSeries& series, const StateDistance& dist,
                                MarginalFeature feature, int resamples, std::uint64_t seed,
                                std::optional<int> block_length) {
    if (resamples < 2) throw ValidationError("bootstrap needs at least 2 resamples");
    const auto codes = series.codes();
    const std::size_t len = codes.size();
    const auto block = static_cast<std::size_t>(
        block_length.value_or(static_cast<int>(std::ceil(std::cbrt(static_cast<double>(len)) - 1e-12))));
    if (block < 1) throw ValidationError("block length must be positive");

    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(resamples));
    std::vector<int> draw(len);
    for (int b = 0; b < resamples; ++b) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
        std::size_t filled = 0;
        while (filled < len) {
            const std::size_t start = rng.below(len);
            for (std::size_t k = 0; k < block && filled < len; ++k) draw[filled++] = codes[(start + k) % len];
        }
        stats.push_back(feature_estimate(OrdinalSeries(draw, series.state_space()), dist, feature));
    }
    const double mean = std::accumulate(stats.begin(), stats.end(), 0.0) / resamples;
    double ss = 0.0;
    for (double s : stats) ss += (s - mean) * (s - mean);
    return std::sqrt(ss / (resamples - 1));
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p-values must lie in [0, 1]");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double scaled = std::min(1.0, static_cast<double>(m - k) * p_values[order[k]]);
        running = std::max(running, scaled);
        adjusted[order[k]] = running;
    }
    return adjusted;
}

}  // namespace ots
