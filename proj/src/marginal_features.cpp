#include "ots/marginal_features.hpp"

#include <algorithm>
#include <cmath>

#include "ots/errors.hpp"
#include "ots/probabilities.hpp"

namespace ots {

namespace {

void check_compatible(const OrdinalSeries& series, const StateDistance& dist) {
    if (dist.size() != series.n() + 1)
        throw ValidationError("distance matrix size does not match the series state space");
}

// Index of the smallest value; later candidates must beat the current best
// by more than rounding noise to win a tie.
int argmin_smallest_index(const Vector& values) {
    int best = 0;
    for (int x = 1; x < values.size(); ++x) {
        const double slack = 1e-12 * std::max(1.0, std::abs(values[best]));
        if (values[x] < values[best] - slack) best = x;
    }
    return best;
}

// E[d(X_t, s_x)] for every x.
Vector expected_distances(const OrdinalSeries& series, const StateDistance& dist) {
    check_compatible(series, dist);
    const Vector p = marginal_probabilities(series);
    return dist.matrix().transpose() * p;
}

double normalize(double value, const StateDistance& dist, bool normalized) {
    if (!normalized) return value;
    if (dist.d0n() == 0.0) throw ValidationError("cannot normalize: d(s_0, s_n) is zero");
    return value / dist.d0n();
}

}  // namespace

double expected_distance_to_state(const OrdinalSeries& series, const StateDistance& dist, int state) {
    check_compatible(series, dist);
    if (state < 0 || state > series.n())
        throw ValidationError("state index " + std::to_string(state) + " out of range");
    double sum = 0.0;
    for (int c : series.codes()) sum += dist(c, state);
    return sum / static_cast<double>(series.length());
}

double divc_expected_distance(const OrdinalSeries& series, const StateDistance& dist) {
    check_compatible(series, dist);
    const Vector p = marginal_probabilities(series);
    return p.dot(dist.matrix() * p);
}

double reflected_expected_distance(const OrdinalSeries& series, const StateDistance& dist) {
    check_compatible(series, dist);
    const Vector p = marginal_probabilities(series);
    const Vector p_reflected = p.reverse();
    return p.dot(dist.matrix() * p_reflected);
}

int ordinal_location_1(const OrdinalSeries& series, const StateDistance& dist) {
    return argmin_smallest_index(expected_distances(series, dist));
}

int ordinal_location_2(const OrdinalSeries& series, const StateDistance& dist) {
    const double to_s0 = expected_distance_to_state(series, dist, 0);
    Vector gaps(series.n() + 1);
    for (int x = 0; x <= series.n(); ++x) gaps[x] = std::abs(to_s0 - dist(x, 0));
    return argmin_smallest_index(gaps);
}

double ordinal_dispersion_1(const OrdinalSeries& series, const StateDistance& dist, bool normalized) {
    const int loc = ordinal_location_1(series, dist);
    return normalize(expected_distance_to_state(series, dist, loc), dist, normalized);
}

double ordinal_dispersion_2(const OrdinalSeries& series, const StateDistance& dist, bool normalized) {
    return normalize(divc_expected_distance(series, dist), dist, normalized);
}

double ordinal_asymmetry(const OrdinalSeries& series, const StateDistance& dist, bool normalized) {
    const double value = reflected_expected_distance(series, dist) - divc_expected_distance(series, dist);
    return normalize(value, dist, normalized);
}

double ordinal_skewness(const OrdinalSeries& series, const StateDistance& dist, bool normalized) {
    const double value = expected_distance_to_state(series, dist, series.n()) -
                         expected_distance_to_state(series, dist, 0);
    return normalize(value, dist, normalized);
}

std::vector<std::string> distance_assumption_warnings(const StateDistance& dist) {
    std::vector<std::string> w;
    if (!dist.maximization())
        w.emplace_back("distance does not satisfy maximization: d(s_0, s_n) is not the largest entry");
    if (!dist.centrosymmetric())
        w.emplace_back("distance is not centrosymmetric: asymmetry and skewness are hard to interpret");
    if (!validate_asymmetry_assumption(dist))
        w.emplace_back("(J - I) D is not positive semidefinite: asymmetry may be negative");
    return w;
}

MarginalFeatureSet marginal_features(const OrdinalSeries& series, const StateDistance& dist,
                                     bool normalized) {
    MarginalFeatureSet out;
    out.location_standard = ordinal_location_1(series, dist);
    out.location_wrt_s0 = ordinal_location_2(series, dist);
    out.dispersion_1 = ordinal_dispersion_1(series, dist, normalized);
    out.dispersion_2 = ordinal_dispersion_2(series, dist, normalized);
    out.asymmetry = ordinal_asymmetry(series, dist, normalized);
    out.skewness = ordinal_skewness(series, dist, normalized);
    out.normalized = normalized;
    out.warnings = distance_assumption_warnings(dist);
    return out;
}

}  // namespace ots
