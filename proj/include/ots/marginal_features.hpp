#pragma once

#include <string>
#include <vector>

#include "ots/core.hpp"

namespace ots {

/// Sample mean of d(X_t, s_i).
double expected_distance_to_state(const OrdinalSeries& series, const StateDistance& dist, int state);

/// sum_ij d(s_i, s_j) p_i p_j: expected distance between two independent copies.
double divc_expected_distance(const OrdinalSeries& series, const StateDistance& dist);

/// sum_ij d(s_i, s_j) p_i p_{n-j}: expected distance to an independent
/// reflected copy.
double reflected_expected_distance(const OrdinalSeries& series, const StateDistance& dist);

/// argmin_x E[d(X_t, x)]; ties go to the smallest index.
int ordinal_location_1(const OrdinalSeries& series, const StateDistance& dist);

/// argmin_x |E[d(X_t, s_0)] - d(x, s_0)|; ties go to the smallest index.
int ordinal_location_2(const OrdinalSeries& series, const StateDistance& dist);

/// E[d(X_t, x_loc)] with x_loc from ordinal_location_1.
double ordinal_dispersion_1(const OrdinalSeries& series, const StateDistance& dist,
                            bool normalized = false);
double ordinal_dispersion_2(const OrdinalSeries& series, const StateDistance& dist,
                            bool normalized = false);
double ordinal_asymmetry(const OrdinalSeries& series, const StateDistance& dist,
                         bool normalized = false);
/// E[d(X_t, s_n)] - E[d(X_t, s_0)].
double ordinal_skewness(const OrdinalSeries& series, const StateDistance& dist,
                        bool normalized = false);

struct MarginalFeatureSet {
    int location_standard = 0;
    int location_wrt_s0 = 0;
    double dispersion_1 = 0.0;
    double dispersion_2 = 0.0;
    double asymmetry = 0.0;
    double skewness = 0.0;
    bool normalized = false;
    /// Assumptions (maximization, centrosymmetry) the distance failed.
    std::vector<std::string> warnings;
};

MarginalFeatureSet marginal_features(const OrdinalSeries& series, const StateDistance& dist,
                                     bool normalized = false);

/// Human-readable notes about assumptions `dist` violates for the marginal
/// features; empty for the three built-in distances.
std::vector<std::string> distance_assumption_warnings(const StateDistance& dist);

}  // namespace ots
