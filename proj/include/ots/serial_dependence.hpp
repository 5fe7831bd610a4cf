#pragma once

#include <optional>

#include "ots/core.hpp"

namespace ots {

/// T x n 0/1 matrix with entry (t, i) = 1 iff C_t <= i.
Eigen::MatrixXi cumulative_binarization(const OrdinalSeries& series);

/// (1/(T-l)) sum_{t>l} d(X_t, X_{t-l}); lag 0 gives 0.
double lagged_expected_distance(const OrdinalSeries& series, const StateDistance& dist, int lag);

/// (disp_d - E[d(X_t, X_{t-l})]) / disp_d. Throws DegenerateError for a
/// constant series.
double ordinal_cohens_kappa(const OrdinalSeries& series, const StateDistance& dist, int lag);

/// A correlation estimate that was clipped into [-1, 1].
struct ClampedMatrix {
    Matrix values;
    bool clamped = false;
};

struct ClampedVector {
    Vector values;
    bool clamped = false;
};

/// psi_ij(l) = (f_ij(l) - f_i f_j) / sqrt(f_i(1-f_i) f_j(1-f_j)), n x n.
/// Marginals use all T observations, the joint uses T-l pairs; plug-in
/// values outside [-1, 1] are clamped and flagged.
ClampedMatrix cumulative_correlations(const OrdinalSeries& series, int lag);

/// Total cumulative correlation: mean of the squared clamped psi_ij(l).
double total_c_cor(const OrdinalSeries& series, int lag);

/// Which cumulative states the mixed measures average over. The definition
/// averages i = 0..n-1 with weight 1/n; the alternative estimator form sums
/// i = 1..n-1 with weight 1/(n-1).
enum class MixedIndexRange { Definitional, EstimatorDisplay };

/// psi*_i(l) = Cov(Y_{t,i}, Z_{t-l}) / sqrt(f_i(1-f_i) sigma^2) for i = 0..n-1.
/// 0 <= lag <= T-1. Covariance over the aligned window with divisor T-l;
/// f_i and sigma^2 (divisor T) over the full series.
ClampedVector mixed_linear_correlations(const OrdinalSeries& series, const NumericSeries& z, int lag);

double total_mixed_c_cor(const OrdinalSeries& series, const NumericSeries& z, int lag,
                         MixedIndexRange range = MixedIndexRange::Definitional);

/// Empirical quantile: the order statistic Z_(ceil(rho T)).
double empirical_quantile(std::span<const double> values, double rho);

/// psi^rho_i(l) = Cov(Y_{t,i}, I(Z_{t-l} <= q(rho))) / sqrt(f_i(1-f_i) rho(1-rho)).
ClampedVector mixed_quantile_correlations(const OrdinalSeries& series, const NumericSeries& z,
                                          int lag, double rho);

/// (1/n) sum_i integral_0^1 psi^rho_i(l)^2 d rho, midpoint rule on `nodes`
/// points rho_k = (k - 1/2) / nodes.
double total_mixed_c_qcor(const OrdinalSeries& series, const NumericSeries& z, int lag,
                          int nodes = 100,
                          MixedIndexRange range = MixedIndexRange::Definitional);

struct DependenceSummary {
    int lag = 1;
    double kappa = 0.0;
    ClampedMatrix psi;
    double tcc = 0.0;
    std::optional<double> tmclc;
    std::optional<double> tmcqc;
};

DependenceSummary dependence_summary(const OrdinalSeries& series, const StateDistance& dist, int lag,
                                     const NumericSeries* z = nullptr);

}  // namespace ots
