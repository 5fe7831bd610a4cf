#include <gtest/gtest.h>

#include <numeric>

#include "ots/distributions.hpp"
#include "ots/errors.hpp"
#include "ots/inference.hpp"
#include "ots/marginal_features.hpp"
#include "ots/probabilities.hpp"
#include "ots/random.hpp"
#include "ots/serial_dependence.hpp"
#include "oracles.hpp"

using namespace ots;

namespace {

OrdinalSeries series(std::vector<int> codes, int states) {
    return OrdinalSeries(std::move(codes), StateSpace(states));
}

StateDistance block(int states) {
    return build_state_distance(DistanceKind::Block, StateSpace(states));
}

OrdinalSeries iid(Rng& rng, const std::vector<double>& p, std::size_t len) {
    std::vector<int> c(len);
    for (auto& x : c) x = rng.categorical(p);
    return series(std::move(c), static_cast<int>(p.size()));
}

OrdinalSeries half_half(int len) {
    std::vector<int> c(len);
    for (int t = 0; t < len; ++t) c[t] = t % 2;
    return series(c, 2);
}

}  // namespace

TEST(Distributions, NormalQuantileAccuracy) {
    EXPECT_NEAR(normal_quantile(0.975), 1.959964, 5e-7);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
    EXPECT_NEAR(two_sided_p_value(1.959963984540054), 0.05, 1e-12);
    EXPECT_THROW(normal_quantile(1.0), ValidationError);
    EXPECT_NEAR(chi_squared_quantile(0.95, 1), 3.841458820694124, 1e-10);
}

TEST(KappaNull, TwoStateExample) {
    const auto x = half_half(100);
    const auto null = kappa_null_distribution(x);
    EXPECT_NEAR(null.mean, -0.01, 1e-15);
    EXPECT_NEAR(null.variance, 0.01, 1e-15);
    const auto cv = kappa_critical_values(x, 0.05);
    EXPECT_NEAR(cv.lower, -0.01 - 0.1959964, 1e-7);
    EXPECT_NEAR(cv.upper, -0.01 + 0.1959964, 1e-7);
    const auto one = kappa_critical_values(x, 1.0);
    EXPECT_DOUBLE_EQ(one.lower, -0.01);
    EXPECT_DOUBLE_EQ(one.upper, -0.01);
}

TEST(KappaNull, BoundsShrinkWithAlphaAndStraddleMean) {
    std::mt19937_64 g(1);
    const auto x = series(oracle::random_codes(g, 4, 200), 5);
    double prev = std::numeric_limits<double>::infinity();
    for (double a : {0.01, 0.05, 0.1, 0.2, 0.5}) {
        const auto cv = kappa_critical_values(x, a);
        const double mean = -1.0 / 200;
        EXPECT_LT(cv.lower, mean);
        EXPECT_GT(cv.upper, mean);
        EXPECT_NEAR(cv.upper - mean, mean - cv.lower, 1e-14);
        EXPECT_LT(cv.upper - mean, prev);
        prev = cv.upper - mean;
    }
}

TEST(KappaNull, ReversalInvariantAndErrors) {
    std::mt19937_64 g(2);
    for (int rep = 0; rep < 50; ++rep) {
        auto c = oracle::random_skewed_codes(g, 5, 80);
        c[0] = 0;
        const auto x = series(c, 6);
        EXPECT_NEAR(kappa_null_distribution(x.reflected()).variance, kappa_null_distribution(x).variance, 1e-14);
    }
    EXPECT_THROW(kappa_null_distribution(series({1, 1, 1}, 3)), DegenerateError);
    EXPECT_THROW(kappa_null_distribution(half_half(10), build_state_distance(DistanceKind::Hamming, StateSpace(2))),
                 UnsupportedDistanceError);
}

TEST(KappaDiagnostics, PeriodicSeries) {
    std::vector<int> c;
    for (int t = 0; t < 60; ++t) c.push_back(t % 2 == 0 ? 0 : 3);
    const auto d = kappa_diagnostics(series(c, 4), 4, 0.05);
    ASSERT_EQ(d.kappas.size(), 4u);
    EXPECT_DOUBLE_EQ(d.kappas[1], 1.0);
    EXPECT_LT(d.p_values[1], 1e-6);
    for (double p : d.p_values) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
    EXPECT_THROW(kappa_diagnostics(series(c, 4), 60), ValidationError);
}

TEST(KappaDiagnostics, PValueMatchesDefinition) {
    std::mt19937_64 g(3);
    const auto x = series(oracle::random_codes(g, 5, 150), 6);
    const auto d = kappa_diagnostics(x, 5);
    for (int l = 1; l <= 5; ++l) {
        const double z = (ordinal_cohens_kappa(x, block(6), l) + 1.0 / 150) / std::sqrt(d.null.variance);
        EXPECT_NEAR(d.p_values[l - 1], 2 * (1 - normal_cdf(std::abs(z))), 1e-12);
    }
}

TEST(LongRunCovariance, ZeroBandwidthIsSampleCovariance) {
    std::mt19937_64 g(4);
    const auto c = oracle::random_codes(g, 3, 50);
    const auto x = series(c, 4);
    const Vector p = marginal_probabilities(x);
    Matrix s = Matrix::Zero(4, 4);
    for (int v : c) {
        Vector e = -p;
        e[v] += 1;
        s += e * e.transpose();
    }
    s /= 50;
    EXPECT_LT((long_run_covariance(x, 0) - s).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(default_bandwidth(1000), 10);
    EXPECT_EQ(default_bandwidth(999), 9);
    EXPECT_EQ(default_bandwidth(27), 3);
}

TEST(LongRunCovariance, PsdAndIidLimit) {
    Rng rng(5);
    const std::vector<double> p{0.1, 0.2, 0.4, 0.2, 0.1};
    const auto x = iid(rng, p, 20000);
    const Matrix lrv = long_run_covariance(x);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lrv);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
    Vector pv = Eigen::Map<const Vector>(p.data(), 5);
    Matrix iid_cov = Matrix(pv.asDiagonal()) - pv * pv.transpose();
    EXPECT_LT((lrv - iid_cov).cwiseAbs().maxCoeff(), 0.02);
    EXPECT_THROW(long_run_covariance(series({0, 1, 0}, 2)), ValidationError);
}

TEST(MarginalTests, SkewnessIidSeIsSampleMeanSe) {
    std::mt19937_64 g(6);
    for (auto k : {DistanceKind::Hamming, DistanceKind::Block, DistanceKind::Euclidean}) {
        const auto c = oracle::random_skewed_codes(g, 4, 120);
        const auto x = series(c, 5);
        const auto d = build_state_distance(k, StateSpace(5));
        std::vector<double> v;
        for (int a : c) v.push_back(d(a, 4) - d(a, 0));
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double ss = 0;
        for (double a : v) ss += (a - mean) * (a - mean);
        const double se = std::sqrt(ss / v.size() / v.size());
        const auto r = test_marginal_feature(x, d, MarginalFeature::Skewness, 0.0, 0.05, InferenceMode::Iid);
        EXPECT_NEAR(r.standard_error, se, 1e-12);
        EXPECT_NEAR(r.statistic, mean / se, 1e-9);
    }
}

TEST(MarginalTests, SymmetricSeriesHasZeroSkewness) {
    std::mt19937_64 g(7);
    auto c = oracle::random_codes(g, 5, 40);
    const auto n = c.size();
    for (std::size_t t = 0; t < n; ++t) c.push_back(5 - c[t]);
    const auto r = test_marginal_feature(series(c, 6), block(6), MarginalFeature::Skewness, 0.0, 0.05,
                                         InferenceMode::Temporal);
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(MarginalTests, DegenerateSeriesThrows) {
    EXPECT_THROW(test_marginal_feature(series({2, 2, 2, 2, 2}, 5), block(5), MarginalFeature::Dispersion, 0.0, 0.05,
                                       InferenceMode::Iid),
                 DegenerateError);
}

TEST(MarginalTests, TestAndIntervalAgree) {
    Rng rng(8);
    const auto x = iid(rng, {0.15, 0.25, 0.3, 0.2, 0.1}, 300);
    const auto d = block(5);
    for (auto f : {MarginalFeature::Dispersion, MarginalFeature::Skewness, MarginalFeature::Asymmetry})
        for (auto mode : {InferenceMode::Iid, InferenceMode::Temporal}) {
            const auto ci = ci_marginal_feature(x, d, f, 0.95, mode);
            const auto ci90 = ci_marginal_feature(x, d, f, 0.90, mode);
            EXPECT_LE(ci.lower, ci.estimate);
            EXPECT_GE(ci.upper, ci.estimate);
            EXPECT_LE(ci.lower, ci90.lower + 1e-12);
            EXPECT_GE(ci.upper, ci90.upper - 1e-12);
            if (f != MarginalFeature::Asymmetry)
                EXPECT_NEAR(ci.lower + ci.upper, ci90.lower + ci90.upper, 1e-12);
            const double width = ci.upper - ci.lower;
            for (double h : {ci.lower - 0.1 * width, ci.lower + 0.01 * width, ci.estimate,
                             ci.upper - 0.01 * width, ci.upper + 0.1 * width}) {
                if (f == MarginalFeature::Asymmetry && h < 0) continue;
                const auto r = test_marginal_feature(x, d, f, h, 0.05, mode);
                EXPECT_EQ(!r.rejects(), h >= ci.lower && h <= ci.upper)
                    << to_string(f) << " h0=" << h << " ci=(" << ci.lower << "," << ci.upper << ")";
                EXPECT_GE(r.p_value, 0.0);
                EXPECT_LE(r.p_value, 1.0);
            }
        }
}

TEST(MarginalTests, AsymmetryUsesChiSquaredReference) {
    Rng rng(9);
    const auto x = iid(rng, {0.1, 0.2, 0.4, 0.2, 0.1}, 400);
    const auto r = test_marginal_feature(x, block(5), MarginalFeature::Asymmetry, 0.0, 0.05, InferenceMode::Iid);
    EXPECT_EQ(r.reference, ReferenceDistribution::ChiSquared);
    EXPECT_EQ(r.degrees_of_freedom, 2);
    EXPECT_NEAR(r.critical_value, chi_squared_quantile(0.95, 2), 1e-12);
    const auto r1 = test_marginal_feature(x, block(5), MarginalFeature::Asymmetry, 0.3, 0.05, InferenceMode::Iid);
    EXPECT_EQ(r1.degrees_of_freedom, 1);
}

TEST(MarginalTests, AsymmetryFallsBackForUnsuitableDistance) {
    Matrix m(3, 3);
    m << 0, 5, 1, 5, 0, 1, 1, 1, 0;
    const auto d = build_state_distance(DistanceKind::Custom, StateSpace(3), m);
    Rng rng(10);
    const auto x = iid(rng, {0.5, 0.3, 0.2}, 200);
    const auto r = test_marginal_feature(x, d, MarginalFeature::Asymmetry, 0.0, 0.05, InferenceMode::Iid);
    EXPECT_EQ(r.reference, ReferenceDistribution::Normal);
    EXPECT_FALSE(r.warnings.empty());
}

TEST(MarginalTests, SmallMonteCarloSize) {
    const std::vector<double> p{0.1, 0.2, 0.4, 0.2, 0.1};
    const auto d = block(5);
    Vector pv = Eigen::Map<const Vector>(p.data(), 5);
    const double true_disp = pv.dot(d.matrix() * pv);
    int rejections = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        Rng rng(derive_seed(99, {static_cast<std::uint64_t>(r)}));
        const auto x = iid(rng, p, 500);
        rejections += test_marginal_feature(x, d, MarginalFeature::Dispersion, true_disp, 0.05, InferenceMode::Iid)
                          .rejects();
    }
    EXPECT_NEAR(rejections / double(reps), 0.05, 0.035);
}

TEST(Bootstrap, DeterministicAndComparableToDelta) {
    Rng rng(11);
    const auto x = iid(rng, {0.2, 0.3, 0.3, 0.2}, 400);
    const auto d = block(4);
    const double a = bootstrap_standard_error(x, d, MarginalFeature::Dispersion, 300, 5);
    EXPECT_EQ(a, bootstrap_standard_error(x, d, MarginalFeature::Dispersion, 300, 5));
    InferenceOptions opt;
    opt.bootstrap_resamples = 300;
    opt.bootstrap_seed = 5;
    const auto r = test_marginal_feature(x, d, MarginalFeature::Dispersion, 1.0, 0.05, InferenceMode::Temporal, opt);
    ASSERT_TRUE(r.bootstrap_standard_error);
    EXPECT_EQ(*r.bootstrap_standard_error, a);
    EXPECT_NEAR(a / r.standard_error, 1.0, 0.3);
}

TEST(Holm, KnownOutput) {
    const std::vector<double> p{0.00, 0.02, 0.68, 0.30, 0.38, 0.49, 0.26, 0.11, 0.03, 0.04};
    const std::vector<double> expected{0.00, 0.18, 1.00, 1.00, 1.00, 1.00, 1.00, 0.66, 0.24, 0.28};
    const auto adj = holm_adjust(p);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(std::round(adj[i] * 100) / 100, expected[i]);
    EXPECT_EQ(holm_adjust(std::vector<double>(4, 0.0)), std::vector<double>(4, 0.0));
    EXPECT_EQ(holm_adjust(std::vector<double>{0.3}), std::vector<double>{0.3});
    EXPECT_THROW(holm_adjust(std::vector<double>{0.1, 1.2}), ValidationError);
    EXPECT_THROW(holm_adjust(std::vector<double>{-0.1}), ValidationError);
}

TEST(Holm, MatchesOracleAndPermutationInvariant) {
    std::mt19937_64 g(12);
    std::uniform_real_distribution<double> u(0, 0.2);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> p(1 + rep % 15);
        for (auto& v : p) v = std::round(u(g) * 100) / 100;
        const auto adj = holm_adjust(p);
        const auto o = oracle::holm(p);
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_NEAR(adj[i], o[i], 1e-15);
            EXPECT_GE(adj[i], p[i]);
            EXPECT_LE(adj[i], 1.0);
        }
        std::vector<std::size_t> perm(p.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), g);
        std::vector<double> q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[perm[i]];
        const auto adjq = holm_adjust(q);
        for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(adjq[i], adj[perm[i]]);
    }
}
