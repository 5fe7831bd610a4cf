#include "ots/probabilities.hpp"

#include <string>

#include "ots/errors.hpp"

namespace ots {

void check_lag(const OrdinalSeries& series, int lag, bool allow_zero) {
    const auto t = static_cast<long long>(series.length());
    const int lowest = allow_zero ? 0 : 1;
    if (lag < lowest || lag > t - 1)
        throw ValidationError("lag " + std::to_string(lag) + " must lie in [" +
                              std::to_string(lowest) + ", " + std::to_string(t - 1) +
                              "] for a series of length " + std::to_string(t));
}

Vector marginal_probabilities(const OrdinalSeries& series) {
    Vector p = Vector::Zero(series.n() + 1);
    for (int c : series.codes()) p[c] += 1.0;
    return p / static_cast<double>(series.length());
}

Matrix joint_probabilities(const OrdinalSeries& series, int lag) {
    check_lag(series, lag);
    const auto codes = series.codes();
    const std::size_t pairs = codes.size() - static_cast<std::size_t>(lag);
    Matrix p = Matrix::Zero(series.n() + 1, series.n() + 1);
    for (std::size_t k = 0; k < pairs; ++k) p(codes[k], codes[k + lag]) += 1.0;
    return p / static_cast<double>(pairs);
}

Vector c_marginal_probabilities(const OrdinalSeries& series) {
    const int n = series.n();
    Vector counts = Vector::Zero(n + 1);
    for (int c : series.codes()) counts[c] += 1.0;
    Vector f(n);
    double running = 0.0;
    for (int i = 0; i < n; ++i) {
        running += counts[i];
        f[i] = running / static_cast<double>(series.length());
    }
    return f;
}

Matrix c_joint_probabilities(const OrdinalSeries& series, int lag) {
    check_lag(series, lag);
    const int n = series.n();
    const auto codes = series.codes();
    const std::size_t pairs = codes.size() - static_cast<std::size_t>(lag);
    // Integer pair counts, then a 2-D prefix sum.
    Matrix counts = Matrix::Zero(n + 1, n + 1);
    for (std::size_t k = 0; k < pairs; ++k) counts(codes[k], codes[k + lag]) += 1.0;
    Matrix f(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = counts(i, j);
            if (i > 0) v += f(i - 1, j);
            if (j > 0) v += f(i, j - 1);
            if (i > 0 && j > 0) v -= f(i - 1, j - 1);
            f(i, j) = v;
        }
    return f / static_cast<double>(pairs);
}

ProbabilityProfile probability_profile(const OrdinalSeries& series) {
    return {marginal_probabilities(series), c_marginal_probabilities(series)};
}

LaggedProbabilityProfile lagged_probability_profile(const OrdinalSeries& series, int lag) {
    return {lag, joint_probabilities(series, lag), c_joint_probabilities(series, lag)};
}

}  // namespace ots
