#include <gtest/gtest.h>

#include "ots/core.hpp"
#include "ots/errors.hpp"
#include "ots/probabilities.hpp"
#include "oracles.hpp"

using namespace ots;

namespace {

const std::vector<int> kAw10{3, 3, 3, 3, 3, 0, 0, 3, 2, 0, 4, 0, 0, 3, 3, 3, 4, 5, 4, 4, 4, 5};

OrdinalSeries series(std::vector<int> codes, int states) {
    return OrdinalSeries(std::move(codes), StateSpace(states));
}

}  // namespace

TEST(StateDistance, BlockMatrix) {
    const auto d = build_state_distance(DistanceKind::Block, StateSpace(3));
    Matrix expected(3, 3);
    expected << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    EXPECT_EQ(d.matrix(), expected);
    EXPECT_EQ(d.d0n(), 2.0);
    EXPECT_TRUE(d.maximization());
    EXPECT_TRUE(d.centrosymmetric());
}

TEST(StateDistance, HammingMatrix) {
    const auto d = build_state_distance(DistanceKind::Hamming, StateSpace(2));
    Matrix expected(2, 2);
    expected << 0, 1, 1, 0;
    EXPECT_EQ(d.matrix(), expected);
}

TEST(StateDistance, EuclideanMatrix) {
    const auto d = build_state_distance(DistanceKind::Euclidean, StateSpace(3));
    Matrix expected(3, 3);
    expected << 0, 1, 4, 1, 0, 1, 4, 1, 0;
    EXPECT_EQ(d.matrix(), expected);
    EXPECT_TRUE(d.centrosymmetric());
}

TEST(StateDistance, BuiltinsAreSymmetricWithZeroDiagonalAndFlagsHold) {
    for (auto kind : {DistanceKind::Hamming, DistanceKind::Block, DistanceKind::Euclidean})
        for (int states = 2; states <= 9; ++states) {
            const auto d = build_state_distance(kind, StateSpace(states));
            EXPECT_EQ(d.matrix(), d.matrix().transpose());
            EXPECT_EQ(d.matrix().diagonal().cwiseAbs().maxCoeff(), 0.0);
            EXPECT_TRUE(d.maximization());
            EXPECT_TRUE(d.centrosymmetric());
        }
}

TEST(StateDistance, CustomValidation) {
    const StateSpace s(3);
    Matrix asym(3, 3);
    asym << 0, 1, 2, 1, 0, 1, 3, 1, 0;
    EXPECT_THROW(build_state_distance(DistanceKind::Custom, s, asym), ValidationError);
    Matrix neg = Matrix::Zero(3, 3);
    neg(0, 1) = neg(1, 0) = -1;
    EXPECT_THROW(build_state_distance(DistanceKind::Custom, s, neg), ValidationError);
    Matrix diag = Matrix::Zero(3, 3);
    diag(1, 1) = 1;
    EXPECT_THROW(build_state_distance(DistanceKind::Custom, s, diag), ValidationError);
    EXPECT_THROW(build_state_distance(DistanceKind::Custom, s), ValidationError);
    EXPECT_THROW(build_state_distance(DistanceKind::Block, s, Matrix::Zero(3, 3)), ValidationError);

    Matrix ok(3, 3);
    ok << 0, 5, 1, 5, 0, 1, 1, 1, 0;
    const auto d = build_state_distance(DistanceKind::Custom, s, ok);
    EXPECT_FALSE(d.maximization());
    EXPECT_FALSE(d.centrosymmetric());
}

TEST(StateDistance, ParseKind) {
    EXPECT_EQ(parse_distance_kind("Block"), DistanceKind::Block);
    EXPECT_EQ(parse_distance_kind("HAMMING"), DistanceKind::Hamming);
    EXPECT_THROW(parse_distance_kind("manhattan"), ValidationError);
}

TEST(AsymmetryAssumption, BlockAndZeroDistance) {
    EXPECT_TRUE(validate_asymmetry_assumption(build_state_distance(DistanceKind::Block, StateSpace(2))));
    EXPECT_TRUE(validate_asymmetry_assumption(build_state_distance(DistanceKind::Block, StateSpace(6))));
    EXPECT_TRUE(validate_asymmetry_assumption(
        build_state_distance(DistanceKind::Custom, StateSpace(4), Matrix::Zero(4, 4))));
}

TEST(AsymmetryAssumption, AgreesWithDirectEigenCheck) {
    for (auto kind : {DistanceKind::Hamming, DistanceKind::Block, DistanceKind::Euclidean})
        for (int states = 2; states <= 8; ++states) {
            const auto d = build_state_distance(kind, StateSpace(states));
            const Matrix j = Matrix::Identity(states, states).rowwise().reverse();
            const Matrix m = (j - Matrix::Identity(states, states)) * d.matrix();
            const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
            const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
            EXPECT_EQ(validate_asymmetry_assumption(d), eig.eigenvalues().minCoeff() >= -1e-9 * scale)
                << to_string(kind) << " with " << states << " states";
        }
}

TEST(StateSpace, LabelsAndValidation) {
    const StateSpace s({"low", "mid", "high"});
    EXPECT_EQ(s.n(), 2);
    EXPECT_EQ(s.code_of("mid"), 1);
    EXPECT_THROW(s.code_of("none"), ValidationError);
    EXPECT_THROW(StateSpace(1), ValidationError);
    EXPECT_THROW(StateSpace(std::vector<std::string>{"a", "a"}), ValidationError);
}

TEST(OrdinalSeries, RangeChecksAndRoundTrip) {
    EXPECT_THROW(series({0, 3}, 3), ValidationError);
    EXPECT_THROW(series({}, 3), ValidationError);
    const StateSpace s({"a", "b", "c"});
    const OrdinalSeries x({0, 2, 1, 1}, s);
    const auto labels = x.to_labels();
    EXPECT_EQ(OrdinalSeries::from_labels(labels, s), x);
    EXPECT_EQ(x.reflected().codes()[0], 2);
    EXPECT_EQ(x.time_reversed().codes()[0], 1);
}

TEST(OrdinalSeries, StateSpaceNotInferredFromData) {
    const auto x = series({0, 0, 1}, 6);
    EXPECT_EQ(marginal_probabilities(x).size(), 6);
}

TEST(Probabilities, MarginalExamples) {
    EXPECT_EQ(marginal_probabilities(series({0, 0, 1, 1}, 2)), Vector::Constant(2, 0.5));
    const auto p = marginal_probabilities(series(kAw10, 6));
    const double expected[] = {5.0 / 22, 0, 1.0 / 22, 9.0 / 22, 5.0 / 22, 2.0 / 22};
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(p[i], expected[i], 1e-15);
    const auto c = marginal_probabilities(series(std::vector<int>(10, 2), 4));
    EXPECT_EQ(c, (Vector(4) << 0, 0, 1, 0).finished());
}

TEST(Probabilities, JointExamples) {
    const auto a = joint_probabilities(series({0, 1, 0, 1}, 2), 1);
    EXPECT_NEAR(a(0, 0), 0, 1e-15);
    EXPECT_NEAR(a(0, 1), 2.0 / 3, 1e-15);
    EXPECT_NEAR(a(1, 0), 1.0 / 3, 1e-15);
    const auto b = joint_probabilities(series({0, 0, 1, 1}, 2), 1);
    EXPECT_NEAR(b(0, 0), 1.0 / 3, 1e-15);
    EXPECT_NEAR(b(0, 1), 1.0 / 3, 1e-15);
    EXPECT_NEAR(b(1, 0), 0, 1e-15);
    EXPECT_NEAR(b(1, 1), 1.0 / 3, 1e-15);
    EXPECT_THROW(joint_probabilities(series({0, 1}, 2), 2), ValidationError);
    EXPECT_THROW(joint_probabilities(series({0, 1}, 2), 0), ValidationError);
}

TEST(Probabilities, CumulativeExamples) {
    const auto f = c_marginal_probabilities(series({0, 1, 2}, 3));
    EXPECT_NEAR(f[0], 1.0 / 3, 1e-15);
    EXPECT_NEAR(f[1], 2.0 / 3, 1e-15);
    const auto aw = c_marginal_probabilities(series(kAw10, 6));
    const double expected[] = {5.0 / 22, 5.0 / 22, 6.0 / 22, 15.0 / 22, 20.0 / 22};
    ASSERT_EQ(aw.size(), 5);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(aw[i], expected[i], 1e-15);
    EXPECT_EQ(c_marginal_probabilities(series(std::vector<int>(5, 0), 3)), Vector::Ones(2));
    EXPECT_EQ(c_joint_probabilities(series({0, 1, 0, 1}, 2), 1)(0, 0), 0.0);
    EXPECT_NEAR(c_joint_probabilities(series({0, 0, 1, 1}, 2), 1)(0, 0), 1.0 / 3, 1e-15);
}

TEST(Probabilities, RandomSeriesMatchEnumeration) {
    std::mt19937_64 g(7);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + rep % 6;
        const int len = 2 + static_cast<int>(g() % 60);
        const auto c = oracle::random_skewed_codes(g, n, len);
        const auto x = series(c, n + 1);
        const auto p = marginal_probabilities(x);
        const auto f = c_marginal_probabilities(x);
        EXPECT_NEAR(p.sum(), 1.0, 1e-12);
        const auto po = oracle::marginal(c, n);
        for (int i = 0; i <= n; ++i) EXPECT_NEAR(p[i], po[i], 1e-12);
        for (int i = 0; i < n; ++i) {
            EXPECT_NEAR(f[i], oracle::cumulative(c, i), 1e-12);
            if (i > 0) EXPECT_LE(f[i - 1], f[i]);
        }
        const int lag = 1 + static_cast<int>(g() % static_cast<unsigned>(len - 1));
        const auto pj = joint_probabilities(x, lag);
        const auto fj = c_joint_probabilities(x, lag);
        EXPECT_NEAR(pj.sum(), 1.0, 1e-12);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) EXPECT_NEAR(pj(i, j), oracle::joint(c, i, j, lag), 1e-12);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                EXPECT_NEAR(fj(i, j), oracle::cumulative_joint(c, i, j, lag), 1e-12);
                EXPECT_NEAR(fj(i, j), pj.topLeftCorner(i + 1, j + 1).sum(), 1e-12);
                if (i > 0) EXPECT_LE(fj(i - 1, j), fj(i, j));
                if (j > 0) EXPECT_LE(fj(i, j - 1), fj(i, j));
            }
    }
}

TEST(Probabilities, LabelsDoNotMatter) {
    const OrdinalSeries a({0, 2, 1, 2}, StateSpace(3));
    const OrdinalSeries b({0, 2, 1, 2}, StateSpace({"x", "y", "z"}));
    EXPECT_EQ(c_marginal_probabilities(a), c_marginal_probabilities(b));
}

TEST(Probabilities, IndependentSeriesFactorize) {
    std::mt19937_64 g(11);
    const auto c = oracle::random_codes(g, 3, 40000);
    const auto x = series(c, 4);
    const auto f = c_marginal_probabilities(x);
    const auto fj = c_joint_probabilities(x, 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(fj(i, j), f[i] * f[j], 4.0 / std::sqrt(40000.0));
}
