#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ots/core.hpp"

namespace ots {

/// (f_0..f_{n-1}, f_ij(1), ..., f_ij(L)), joint blocks row-major with the
/// earlier observation as row. Length n + L n^2.
Vector cumulative_feature_vector(const OrdinalSeries& series, int max_lag = 2);

/// (p_0..p_n, p_ij(1), ..., p_ij(L)). Length (n+1) + L (n+1)^2.
Vector pmf_feature_vector(const OrdinalSeries& series, int max_lag = 2);

struct FeatureDescriptor {
    std::string name;
    int lag = 0;  ///< 0 for marginal features
    int i = -1;
    int j = -1;
};

struct FeatureMatrix {
    Matrix rows;  ///< one row per series
    std::vector<FeatureDescriptor> schema;
};

/// Symmetric, zero-diagonal matrix kept as its strict upper triangle.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::size_t size = 0);
    static DistanceMatrix from_dense(const Matrix& dense);

    std::size_t size() const noexcept { return size_; }
    double operator()(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double value);
    Matrix to_dense() const;

private:
    std::size_t index(std::size_t i, std::size_t j) const;
    std::size_t size_;
    std::vector<double> upper_;
};

enum class DatasetMetric { D1, DPMF };

/// d_1 / d_PMF between every pair of series. `squared` gives the sums of
/// squared differences as displayed; otherwise their square roots (the plain
/// Euclidean distance between feature vectors). `threads` <= 1 runs inline.
DistanceMatrix pairwise_distance_matrix(const OtsDataset& dataset, DatasetMetric metric, int max_lag = 2,
                                        bool squared = true, int threads = 1);

/// Euclidean distance between rows of an arbitrary feature matrix.
DistanceMatrix pairwise_distance_matrix(const FeatureMatrix& features, bool squared = false,
                                        int threads = 1);

FeatureMatrix cumulative_feature_matrix(const OtsDataset& dataset, int max_lag = 2, int threads = 1);
FeatureMatrix pmf_feature_matrix(const OtsDataset& dataset, int max_lag = 2, int threads = 1);

struct ScalingResult {
    Matrix coordinates;  ///< m x dims, centred at the origin
    Vector eigenvalues;  ///< top `dims` eigenvalues of the double-centred matrix
    std::vector<std::string> warnings;
};

/// Classical (Torgerson) scaling of -1/2 J D^2 J.
ScalingResult classical_mds(const DistanceMatrix& dm, int dims = 2);

struct PamResult {
    std::vector<int> labels;          ///< in [0, k)
    std::vector<std::size_t> medoids; ///< label c has medoid medoids[c]
    double build_cost = 0.0;
    double cost = 0.0;
    int swaps = 0;
};

/// Partitioning around medoids: greedy BUILD, then the best improving
/// medoid/non-medoid swap until none remains. Ties go to the lowest index.
PamResult pam_cluster(const DistanceMatrix& dm, int k);

struct KMeansResult {
    std::vector<int> labels;
    Matrix centroids;
    double within_ss = 0.0;
    int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs.
KMeansResult kmeans_cluster(const Matrix& features, int k, std::uint64_t seed, int restarts = 10,
                            int max_iterations = 100);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct OutlierReport {
    std::vector<double> scores;        ///< sum of distances to all other series
    std::vector<std::size_t> ranking;  ///< decreasing score, ties by lower index
    std::vector<bool> fence_flags;
    double upper_fence = 0.0;
};

OutlierReport outlier_ranking(const DistanceMatrix& dm);

/// Type-7 (linear interpolation) sample quantile.
double quantile_type7(std::span<const double> values, double prob);

/// score > Q3 + range_coef * IQR. Needs at least 4 scores.
std::vector<bool> boxplot_outlier_flags(std::span<const double> scores, double range_coef = 1.0,
                                        double* upper_fence = nullptr);

}  // namespace ots
