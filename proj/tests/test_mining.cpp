#include <gtest/gtest.h>

#include "ots/errors.hpp"
#include "ots/mining.hpp"
#include "ots/random.hpp"
#include "oracles.hpp"

using namespace ots;

namespace {

OrdinalSeries series(std::vector<int> codes, int states) {
    return OrdinalSeries(std::move(codes), StateSpace(states));
}

OtsDataset dataset(std::vector<std::vector<int>> rows, int states) {
    std::vector<OrdinalSeries> s;
    for (auto& r : rows) s.push_back(series(r, states));
    return OtsDataset("t", StateSpace(states), std::move(s));
}

Matrix planar_distances(const Matrix& pts) {
    Matrix d(pts.rows(), pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
        for (Eigen::Index j = 0; j < pts.rows(); ++j) d(i, j) = (pts.row(i) - pts.row(j)).norm();
    return d;
}

}  // namespace

TEST(FeatureVectors, Examples) {
    const auto a = series({0, 0, 1, 1}, 2), b = series({1, 1, 0, 0}, 2);
    const auto va = cumulative_feature_vector(a, 1);
    ASSERT_EQ(va.size(), 2);
    EXPECT_DOUBLE_EQ(va[0], 0.5);
    EXPECT_NEAR(va[1], 1.0 / 3, 1e-15);
    EXPECT_NEAR((va - cumulative_feature_vector(b, 1)).squaredNorm(), 0.0, 1e-15);
    EXPECT_NEAR((pmf_feature_vector(a, 1) - pmf_feature_vector(b, 1)).squaredNorm(), 2.0 / 9, 1e-15);
    EXPECT_EQ(cumulative_feature_vector(series({0, 1, 2, 1, 0}, 3)).size(), 2 + 2 * 4);
    EXPECT_EQ(pmf_feature_vector(series({0, 1, 2, 1, 0}, 3)).size(), 3 + 2 * 9);
    EXPECT_THROW(cumulative_feature_vector(series({0, 1}, 2), 2), ValidationError);
}

TEST(PairwiseDistances, ExamplesAndConsistency) {
    const auto ds = dataset({{0, 0, 1, 1}, {1, 1, 0, 0}}, 2);
    EXPECT_NEAR(pairwise_distance_matrix(ds, DatasetMetric::DPMF, 1)(0, 1), 2.0 / 9, 1e-15);
    EXPECT_NEAR(pairwise_distance_matrix(ds, DatasetMetric::D1, 1)(0, 1), 0.0, 1e-15);
    EXPECT_EQ(pairwise_distance_matrix(dataset({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}, 3), DatasetMetric::D1, 1)
                  .to_dense(),
              Matrix::Zero(3, 3));

    std::mt19937_64 g(1);
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 12; ++i) rows.push_back(oracle::random_codes(g, 4, 40));
    const auto big = dataset(rows, 5);
    const auto sq = pairwise_distance_matrix(big, DatasetMetric::D1);
    const auto root = pairwise_distance_matrix(big, DatasetMetric::D1, 2, false);
    const auto threaded = pairwise_distance_matrix(big, DatasetMetric::D1, 2, true, 4);
    const auto pmf = pairwise_distance_matrix(big, DatasetMetric::DPMF);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) {
            EXPECT_NEAR(sq(i, j), (cumulative_feature_vector(big[i]) - cumulative_feature_vector(big[j])).squaredNorm(),
                        1e-12);
            EXPECT_NEAR(pmf(i, j), (pmf_feature_vector(big[i]) - pmf_feature_vector(big[j])).squaredNorm(), 1e-12);
            EXPECT_NEAR(root(i, j), std::sqrt(sq(i, j)), 1e-12);
            EXPECT_EQ(threaded(i, j), sq(i, j));
            EXPECT_EQ(sq(i, j), sq(j, i));
            for (std::size_t k = 0; k < 12; ++k) EXPECT_LE(root(i, j), root(i, k) + root(k, j) + 1e-12);
        }
}

TEST(DistanceMatrix, DenseRoundTripAndValidation) {
    Matrix d(3, 3);
    d << 0, 1, 2, 1, 0, 3, 2, 3, 0;
    EXPECT_EQ(DistanceMatrix::from_dense(d).to_dense(), d);
    d(0, 1) = 5;
    EXPECT_THROW(DistanceMatrix::from_dense(d), ValidationError);
    DistanceMatrix m(3);
    EXPECT_THROW(m.set(0, 1, -1), ValidationError);
    EXPECT_THROW(m(0, 3), ValidationError);
}

TEST(Scaling, TwoPointsAndTriangle) {
    Matrix two(2, 2);
    two << 0, 4, 4, 0;
    const auto r = classical_mds(DistanceMatrix::from_dense(two), 1);
    EXPECT_NEAR(std::abs(r.coordinates(0, 0)), 2.0, 1e-12);
    EXPECT_NEAR(r.coordinates(0, 0) + r.coordinates(1, 0), 0.0, 1e-12);

    Matrix tri = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
    const auto t = classical_mds(DistanceMatrix::from_dense(tri));
    EXPECT_LT((planar_distances(t.coordinates) - tri).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_TRUE(t.warnings.empty());
}

TEST(Scaling, RecoversPlanarPoints) {
    std::mt19937_64 g(2);
    std::normal_distribution<double> nd(0, 3);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix pts(30, 2);
        for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = nd(g);
        const Matrix d = planar_distances(pts);
        const auto r = classical_mds(DistanceMatrix::from_dense(d));
        EXPECT_LT((planar_distances(r.coordinates) - d).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT(r.coordinates.colwise().sum().cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Scaling, CollinearPointsPadAndWarn) {
    Matrix pts(4, 2);
    pts << 0, 0, 1, 0, 2, 0, 5, 0;
    const auto r = classical_mds(DistanceMatrix::from_dense(planar_distances(pts)));
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_EQ(r.coordinates.col(1), Vector::Zero(4));
    EXPECT_THROW(classical_mds(DistanceMatrix::from_dense(Matrix::Zero(2, 2))), ValidationError);
}

TEST(Pam, SmallCases) {
    Matrix d(3, 3);
    d << 0, 2, 3, 2, 0, 4, 3, 4, 0;
    const auto one = pam_cluster(DistanceMatrix::from_dense(d), 1);
    EXPECT_EQ(one.medoids, std::vector<std::size_t>{0});
    const auto all = pam_cluster(DistanceMatrix::from_dense(d), 3);
    EXPECT_EQ(all.cost, 0.0);
    EXPECT_EQ(all.labels, (std::vector<int>{0, 1, 2}));
    EXPECT_THROW(pam_cluster(DistanceMatrix::from_dense(d), 4), ValidationError);
    EXPECT_THROW(pam_cluster(DistanceMatrix::from_dense(d), 0), ValidationError);
}

TEST(Pam, SeparatedBlobsAndCostMonotone) {
    std::mt19937_64 g(3);
    std::normal_distribution<double> nd(0, 0.3);
    Matrix pts(40, 2);
    std::vector<int> truth(40);
    for (int i = 0; i < 40; ++i) {
        truth[i] = i % 2;
        pts(i, 0) = nd(g) + 10 * truth[i];
        pts(i, 1) = nd(g);
    }
    const auto r = pam_cluster(DistanceMatrix::from_dense(planar_distances(pts)), 2);
    EXPECT_DOUBLE_EQ(adjusted_rand_index(r.labels, truth), 1.0);
    EXPECT_LE(r.cost, r.build_cost);
    for (std::size_t c = 0; c < r.medoids.size(); ++c) EXPECT_EQ(r.labels[r.medoids[c]], static_cast<int>(c));
}

TEST(Pam, RandomMatricesImproveOnBuild) {
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix pts(25, 3);
        for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = u(g);
        const auto dm = DistanceMatrix::from_dense(planar_distances(pts));
        const auto r = pam_cluster(dm, 3);
        EXPECT_LE(r.cost, r.build_cost + 1e-12);
        double cost = 0;
        for (std::size_t i = 0; i < 25; ++i) {
            double best = 1e300;
            for (auto m : r.medoids) best = std::min(best, dm(i, m));
            EXPECT_DOUBLE_EQ(dm(i, r.medoids[r.labels[i]]), best);
            cost += best;
        }
        EXPECT_NEAR(cost, r.cost, 1e-9);
    }
}

TEST(KMeans, SeparatedCloudsAndDeterminism) {
    std::mt19937_64 g(5);
    std::normal_distribution<double> nd(0, 0.2);
    Matrix x(50, 3);
    std::vector<int> truth(50);
    for (int i = 0; i < 50; ++i) {
        truth[i] = i < 25;
        for (int j = 0; j < 3; ++j) x(i, j) = nd(g) + 5 * truth[i];
    }
    const auto a = kmeans_cluster(x, 2, 42);
    EXPECT_DOUBLE_EQ(adjusted_rand_index(a.labels, truth), 1.0);
    const auto b = kmeans_cluster(x, 2, 42);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.within_ss, b.within_ss);
    const auto one = kmeans_cluster(x, 1, 1);
    EXPECT_LT((one.centroids.row(0) - x.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(kmeans_cluster(x, 51, 1), ValidationError);
}

TEST(KMeans, DuplicatePointsDoNotBreak) {
    Matrix x = Matrix::Zero(6, 2);
    x.row(5) << 1, 1;
    const auto r = kmeans_cluster(x, 3, 7);
    EXPECT_EQ(r.labels.size(), 6u);
    EXPECT_NEAR(r.within_ss, 0.0, 1e-12);
}

TEST(Ari, Examples) {
    const std::vector<int> a{0, 0, 1, 1}, b{1, 1, 0, 0}, c{0, 1, 0, 1};
    EXPECT_DOUBLE_EQ(adjusted_rand_index(a, a), 1.0);
    EXPECT_DOUBLE_EQ(adjusted_rand_index(a, b), 1.0);
    EXPECT_DOUBLE_EQ(adjusted_rand_index(a, c), -0.5);
    EXPECT_THROW(adjusted_rand_index(a, std::vector<int>{0, 1}), ValidationError);
}

TEST(Ari, MatchesPairCountingAndRelabeling) {
    std::mt19937_64 g(6);
    double total = 0;
    const int draws = 1000;
    for (int rep = 0; rep < draws; ++rep) {
        std::vector<int> a(100), b(100);
        for (auto& v : a) v = static_cast<int>(g() % 4);
        for (auto& v : b) v = static_cast<int>(g() % 4);
        const double ari = adjusted_rand_index(a, b);
        total += ari;
        if (rep < 50) {
            EXPECT_NEAR(ari, oracle::ari(a, b), 1e-12);
            std::vector<int> relabeled;
            for (int v : a) relabeled.push_back((v * 3 + 1) % 4);
            EXPECT_NEAR(adjusted_rand_index(relabeled, b), ari, 1e-12);
        }
    }
    EXPECT_LT(std::abs(total / draws), 0.02);
}

TEST(Outliers, RankingAndFence) {
    Matrix d = Matrix::Constant(5, 5, 1.0) - Matrix::Identity(5, 5);
    const auto tie = outlier_ranking(DistanceMatrix::from_dense(d));
    EXPECT_EQ(tie.ranking, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    EXPECT_EQ(std::count(tie.fence_flags.begin(), tie.fence_flags.end(), true), 0);

    for (int i = 0; i < 4; ++i) d(i, 4) = d(4, i) = 10;
    const auto r = outlier_ranking(DistanceMatrix::from_dense(d));
    EXPECT_EQ(r.ranking.front(), 4u);
    EXPECT_TRUE(r.fence_flags[4]);
}

TEST(Outliers, BoxplotFlags) {
    const std::vector<double> s{1, 1, 1, 1, 100};
    const auto f = boxplot_outlier_flags(s);
    EXPECT_EQ(f, (std::vector<bool>{false, false, false, false, true}));
    EXPECT_EQ(boxplot_outlier_flags(std::vector<double>(6, 3.0)), std::vector<bool>(6, false));
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9.74, 9.76};
    double fence = 0;
    const auto g = boxplot_outlier_flags(v, 1.0, &fence);
    EXPECT_NEAR(quantile_type7(v, 0.25), 3.25, 1e-12);
    EXPECT_NEAR(quantile_type7(v, 0.75), 7.75, 1e-12);
    EXPECT_NEAR(fence, 12.25, 1e-12);
    EXPECT_FALSE(g.back());
    EXPECT_TRUE(boxplot_outlier_flags(v, 0.4)[9]);
    EXPECT_THROW(boxplot_outlier_flags(std::vector<double>{1, 2, 3}), ValidationError);
}
