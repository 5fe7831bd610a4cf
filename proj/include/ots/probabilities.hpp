#pragma once

#include "ots/core.hpp"

namespace ots {

// Row index of every joint matrix is the earlier observation X_{t-l}, column
// index the later one X_t.

/// p_i = #{t : C_t = i} / T, length n+1.
Vector marginal_probabilities(const OrdinalSeries& series);

/// p_ij(l) over the T-l pairs (C_t, C_{t+l}); requires 1 <= lag <= T-1.
Matrix joint_probabilities(const OrdinalSeries& series, int lag);

/// f_i = #{t : C_t <= i} / T for i = 0..n-1 (f_n = 1 is left out).
Vector c_marginal_probabilities(const OrdinalSeries& series);

/// f_ij(l) = #{t : C_t <= i, C_{t+l} <= j} / (T-l), n x n.
Matrix c_joint_probabilities(const OrdinalSeries& series, int lag);

struct ProbabilityProfile {
    Vector p_hat;
    Vector f_hat;
};

struct LaggedProbabilityProfile {
    int lag = 1;
    Matrix p_joint;
    Matrix f_joint;
};

ProbabilityProfile probability_profile(const OrdinalSeries& series);
LaggedProbabilityProfile lagged_probability_profile(const OrdinalSeries& series, int lag);

/// Throws unless 1 <= lag <= T-1 (or 0 <= lag when allow_zero).
void check_lag(const OrdinalSeries& series, int lag, bool allow_zero = false);

}  // namespace ots
