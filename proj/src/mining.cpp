#include "ots/mining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ots/errors.hpp"
#include "ots/parallel.hpp"
#include "ots/probabilities.hpp"
#include "ots/random.hpp"

namespace ots {

// ---------------------------------------------------------------------------
// feature vectors

Vector cumulative_feature_vector(const OrdinalSeries& series, int max_lag) {
    if (max_lag < 1) throw ValidationError("max lag must be at least 1");
    check_lag(series, max_lag);
    const int n = series.n();
    Vector v(n + max_lag * n * n);
    v.head(n) = c_marginal_probabilities(series);
    Eigen::Index pos = n;
    for (int l = 1; l <= max_lag; ++l) {
        const Matrix f = c_joint_probabilities(series, l);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v[pos++] = f(i, j);
    }
    return v;
}

Vector pmf_feature_vector(const OrdinalSeries& series, int max_lag) {
    if (max_lag < 1) throw ValidationError("max lag must be at least 1");
    check_lag(series, max_lag);
    const int m = series.n() + 1;
    Vector v(m + max_lag * m * m);
    v.head(m) = marginal_probabilities(series);
    Eigen::Index pos = m;
    for (int l = 1; l <= max_lag; ++l) {
        const Matrix p = joint_probabilities(series, l);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) v[pos++] = p(i, j);
    }
    return v;
}

namespace {

std::vector<FeatureDescriptor> probability_schema(const char* marginal, const char* joint, int states,
                                                  int max_lag) {
    std::vector<FeatureDescriptor> schema;
    for (int i = 0; i < states; ++i) schema.push_back({std::string(marginal) + "_" + std::to_string(i), 0, i, -1});
    for (int l = 1; l <= max_lag; ++l)
        for (int i = 0; i < states; ++i)
            for (int j = 0; j < states; ++j)
                schema.push_back({std::string(joint) + "_" + std::to_string(i) + "_" + std::to_string(j) +
                                      "_lag" + std::to_string(l),
                                  l, i, j});
    return schema;
}

template <class VectorFn>
FeatureMatrix stack_features(const OtsDataset& dataset, int threads, std::vector<FeatureDescriptor> schema,
                             VectorFn&& fn) {
    if (dataset.size() == 0) throw ValidationError("dataset is empty");
    std::vector<Vector> rows(dataset.size());
    parallel_for(dataset.size(), threads, [&](std::size_t i) { rows[i] = fn(dataset[i]); });
    FeatureMatrix out;
    out.rows = Matrix(static_cast<Eigen::Index>(rows.size()), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) out.rows.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    out.schema = std::move(schema);
    return out;
}

}  // namespace

FeatureMatrix cumulative_feature_matrix(const OtsDataset& dataset, int max_lag, int threads) {
    const int n = dataset.state_space().n();
    return stack_features(dataset, threads, probability_schema("f", "f", n, max_lag),
                          [&](const OrdinalSeries& s) { return cumulative_feature_vector(s, max_lag); });
}

FeatureMatrix pmf_feature_matrix(const OtsDataset& dataset, int max_lag, int threads) {
    const int m = dataset.state_space().size();
    return stack_features(dataset, threads, probability_schema("p", "p", m, max_lag),
                          [&](const OrdinalSeries& s) { return pmf_feature_vector(s, max_lag); });
}

// ---------------------------------------------------------------------------
// distance matrices

DistanceMatrix::DistanceMatrix(std::size_t size) : size_(size), upper_(size * (size > 0 ? size - 1 : 0) / 2, 0.0) {}

std::size_t DistanceMatrix::index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // Row i of the strict upper triangle starts after i*(2m-i-1)/2 entries.
    return i * (2 * size_ - i - 1) / 2 + (j - i - 1);
}

double DistanceMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i >= size_ || j >= size_) throw ValidationError("distance matrix index out of range");
    if (i == j) return 0.0;
    return upper_[index(i, j)];
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
    if (i >= size_ || j >= size_) throw ValidationError("distance matrix index out of range");
    if (i == j) {
        if (value != 0.0) throw ValidationError("distance matrix diagonal must be zero");
        return;
    }
    if (!(value >= 0.0)) throw ValidationError("distances must be nonnegative");
    upper_[index(i, j)] = value;
}

Matrix DistanceMatrix::to_dense() const {
    const auto m = static_cast<Eigen::Index>(size_);
    Matrix d = Matrix::Zero(m, m);
    for (std::size_t i = 0; i < size_; ++i)
        for (std::size_t j = i + 1; j < size_; ++j) {
            const double v = upper_[index(i, j)];
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    return d;
}

DistanceMatrix DistanceMatrix::from_dense(const Matrix& dense) {
    if (dense.rows() != dense.cols()) throw ValidationError("distance matrix must be square");
    const auto m = static_cast<std::size_t>(dense.rows());
    DistanceMatrix out(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) != 0.0)
            throw ValidationError("distance matrix diagonal must be zero");
        for (std::size_t j = i + 1; j < m; ++j) {
            const double a = dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const double b = dense(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
            if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
                throw ValidationError("distance matrix must be symmetric");
            out.set(i, j, a);
        }
    }
    return out;
}

namespace {

DistanceMatrix row_distances(const Matrix& rows, bool squared, int threads) {
    const auto m = static_cast<std::size_t>(rows.rows());
    DistanceMatrix dm(m);
    // Each i owns its slice of the upper triangle, so writes never collide.
    parallel_for(m, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double sq = (rows.row(static_cast<Eigen::Index>(i)) - rows.row(static_cast<Eigen::Index>(j)))
                                  .squaredNorm();
            dm.set(i, j, squared ? sq : std::sqrt(sq));
        }
    });
    return dm;
}

}  // namespace

DistanceMatrix pairwise_distance_matrix(const OtsDataset& dataset, DatasetMetric metric, int max_lag,
                                        bool squared, int threads) {
    if (dataset.size() < 2) throw ValidationError("pairwise distances need at least two series");
    const auto features = metric == DatasetMetric::D1 ? cumulative_feature_matrix(dataset, max_lag, threads)
                                                      : pmf_feature_matrix(dataset, max_lag, threads);
    return row_distances(features.rows, squared, threads);
}

DistanceMatrix pairwise_distance_matrix(const FeatureMatrix& features, bool squared, int threads) {
    if (features.rows.rows() < 2) throw ValidationError("pairwise distances need at least two rows");
    return row_distances(features.rows, squared, threads);
}

// ---------------------------------------------------------------------------
// classical scaling

ScalingResult classical_mds(const DistanceMatrix& dm, int dims) {
    const auto m = static_cast<Eigen::Index>(dm.size());
    if (dims < 1) throw ValidationError("scaling needs at least one dimension");
    if (m < dims + 1) throw ValidationError("scaling to " + std::to_string(dims) + " dimensions needs at least " +
                                            std::to_string(dims + 1) + " points");
    const Matrix d = dm.to_dense();
    const Matrix d2 = d.cwiseProduct(d);
    const Matrix centering = Matrix::Identity(m, m) - Matrix::Constant(m, m, 1.0 / static_cast<double>(m));
    Matrix b = -0.5 * centering * d2 * centering;
    b = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(b);

    ScalingResult out;
    out.coordinates = Matrix::Zero(m, dims);
    out.eigenvalues = Vector::Zero(dims);
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    int short_dims = 0;
    for (int a = 0; a < dims; ++a) {
        const Eigen::Index col = m - 1 - a;  // eigenvalues ascend
        const double lambda = eig.eigenvalues()[col];
        out.eigenvalues[a] = lambda;
        if (lambda <= 1e-12 * scale) {
            ++short_dims;
            continue;
        }
        Vector v = eig.eigenvectors().col(col);
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        if (v[arg] < 0) v = -v;
        out.coordinates.col(a) = v * std::sqrt(lambda);
    }
    if (short_dims > 0)
        out.warnings.push_back(std::to_string(short_dims) +
                               " dimension(s) had no positive eigenvalue and were set to zero");
    return out;
}

// ---------------------------------------------------------------------------
// PAM

namespace {

double assignment_cost(const Matrix& d, const std::vector<std::size_t>& medoids) {
    double cost = 0.0;
    for (Eigen::Index j = 0; j < d.rows(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (auto med : medoids) best = std::min(best, d(j, static_cast<Eigen::Index>(med)));
        cost += best;
    }
    return cost;
}

}  // namespace

PamResult pam_cluster(const DistanceMatrix& dm, int k) {
    const std::size_t m = dm.size();
    if (k < 1 || static_cast<std::size_t>(k) > m)
        throw ValidationError("k must lie in [1, " + std::to_string(m) + "]");
    const Matrix d = dm.to_dense();
    const double eps = 1e-12 * std::max(1.0, d.maxCoeff());

    // BUILD
    std::vector<std::size_t> medoids;
    std::vector<bool> is_medoid(m, false);
    {
        Eigen::Index first;
        d.rowwise().sum().minCoeff(&first);  // first minimum
        medoids.push_back(static_cast<std::size_t>(first));
        is_medoid[static_cast<std::size_t>(first)] = true;
    }
    Vector nearest = d.col(static_cast<Eigen::Index>(medoids.front()));
    while (medoids.size() < static_cast<std::size_t>(k)) {
        double best_gain = -1.0;
        std::size_t best = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (is_medoid[i]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                gain += std::max(nearest[static_cast<Eigen::Index>(j)] -
                                     d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)),
                                 0.0);
            if (gain > best_gain + eps) {
                best_gain = gain;
                best = i;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = true;
        nearest = nearest.cwiseMin(d.col(static_cast<Eigen::Index>(best)));
    }

    PamResult out;
    out.build_cost = assignment_cost(d, medoids);
    double cost = out.build_cost;

    // SWAP
    for (;;) {
        double best_cost = cost;
        std::size_t best_slot = 0, best_candidate = m;
        for (std::size_t slot = 0; slot < medoids.size(); ++slot)
            for (std::size_t h = 0; h < m; ++h) {
                if (is_medoid[h]) continue;
                auto trial = medoids;
                trial[slot] = h;
                const double c = assignment_cost(d, trial);
                if (c < best_cost - eps) {
                    best_cost = c;
                    best_slot = slot;
                    best_candidate = h;
                }
            }
        if (best_candidate == m) break;
        is_medoid[medoids[best_slot]] = false;
        is_medoid[best_candidate] = true;
        medoids[best_slot] = best_candidate;
        cost = best_cost;
        ++out.swaps;
    }

    std::sort(medoids.begin(), medoids.end());
    out.medoids = medoids;
    out.cost = cost;
    out.labels.assign(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < medoids.size(); ++c) {
            const double v = d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(medoids[c]));
            if (v < best) {
                best = v;
                out.labels[j] = static_cast<int>(c);
            }
        }
    }
    for (std::size_t c = 0; c < medoids.size(); ++c) out.labels[medoids[c]] = static_cast<int>(c);
    return out;
}

// ---------------------------------------------------------------------------
// k-means

namespace {

struct LloydRun {
    std::vector<int> labels;
    Matrix centroids;
    double wss = 0.0;
    int iterations = 0;
};

Matrix plus_plus_seeds(const Matrix& x, int k, Rng& rng) {
    const Eigen::Index m = x.rows();
    Matrix c(k, x.cols());
    c.row(0) = x.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m))));
    Vector d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
    for (int a = 1; a < k; ++a) {
        Eigen::Index pick;
        if (d2.sum() > 0.0) {
            pick = rng.categorical(std::span<const double>(d2.data(), static_cast<std::size_t>(m)));
        } else {
            pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m)));
        }
        c.row(a) = x.row(pick);
        d2 = d2.cwiseMin((x.rowwise() - c.row(a)).rowwise().squaredNorm());
    }
    return c;
}

LloydRun lloyd(const Matrix& x, Matrix centroids, int max_iterations) {
    const Eigen::Index m = x.rows();
    const auto k = centroids.rows();
    LloydRun run;
    run.labels.assign(static_cast<std::size_t>(m), -1);
    for (int it = 0; it < max_iterations; ++it) {
        bool changed = false;
        Vector own(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (Eigen::Index c = 0; c < k; ++c) {
                const double dd = (x.row(i) - centroids.row(c)).squaredNorm();
                if (dd < best_d) {
                    best_d = dd;
                    best = static_cast<int>(c);
                }
            }
            own[i] = best_d;
            if (run.labels[static_cast<std::size_t>(i)] != best) changed = true;
            run.labels[static_cast<std::size_t>(i)] = best;
        }
        run.iterations = it + 1;
        if (!changed && it > 0) break;

        Matrix sums = Matrix::Zero(k, x.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < m; ++i) {
            sums.row(run.labels[static_cast<std::size_t>(i)]) += x.row(i);
            ++counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
            } else {
                // Empty cluster: move it onto the point worst served so far.
                Eigen::Index far;
                own.maxCoeff(&far);
                centroids.row(c) = x.row(far);
                own[far] = 0.0;
            }
        }
    }
    run.centroids = centroids;
    run.wss = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        run.wss += (x.row(i) - centroids.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
    return run;
}

}  // namespace

KMeansResult kmeans_cluster(const Matrix& features, int k, std::uint64_t seed, int restarts, int max_iterations) {
    if (k < 1 || k > features.rows()) throw ValidationError("k must lie in [1, number of rows]");
    if (restarts < 1) throw ValidationError("k-means needs at least one restart");
    std::optional<LloydRun> best;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
        auto run = lloyd(features, plus_plus_seeds(features, k, rng), max_iterations);
        if (!best || run.wss < best->wss) best = std::move(run);
    }
    return {best->labels, best->centroids, best->wss, best->iterations};
}

// ---------------------------------------------------------------------------
// ARI

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw ValidationError("partitions must have the same length");
    const std::size_t m = a.size();
    if (m < 2) throw ValidationError("ARI needs at least two items");
    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> rows, cols;
    for (std::size_t i = 0; i < m; ++i) {
        cells[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, v] : cells) index += choose2(v);
    for (const auto& [key, v] : rows) sum_a += choose2(v);
    for (const auto& [key, v] : cols) sum_b += choose2(v);
    const double total = choose2(static_cast<double>(m));
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return index == expected ? 1.0 : 0.0;
    return (index - expected) / (max_index - expected);
}

// ---------------------------------------------------------------------------
// outliers

double quantile_type7(std::span<const double> values, double prob) {
    if (values.empty()) throw ValidationError("quantile of an empty sample");
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    const double h = (static_cast<double>(s.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

std::vector<bool> boxplot_outlier_flags(std::span<const double> scores, double range_coef, double* upper_fence) {
    if (scores.size() < 4) throw ValidationError("boxplot flags need at least 4 scores");
    const double q1 = quantile_type7(scores, 0.25);
    const double q3 = quantile_type7(scores, 0.75);
    const double fence = q3 + range_coef * (q3 - q1);
    if (upper_fence) *upper_fence = fence;
    std::vector<bool> flags(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) flags[i] = scores[i] > fence;
    return flags;
}

OutlierReport outlier_ranking(const DistanceMatrix& dm) {
    const std::size_t m = dm.size();
    if (m < 2) throw ValidationError("outlier ranking needs at least two series");
    OutlierReport r;
    r.scores.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) r.scores[i] += dm(i, j);
    r.ranking.resize(m);
    std::iota(r.ranking.begin(), r.ranking.end(), 0);
    std::stable_sort(r.ranking.begin(), r.ranking.end(),
                     [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });
    if (m >= 4) {
        r.fence_flags = boxplot_outlier_flags(r.scores, 1.0, &r.upper_fence);
    } else {
        r.fence_flags.assign(m, false);
        r.upper_fence = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace ots
