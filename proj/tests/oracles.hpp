#pragma once

// Brute-force reference implementations. They work from raw codes by
// enumeration and share no code with the library estimators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Codes = std::vector<int>;
using Dist = std::function<double(int, int)>;

inline double block(int i, int j) { return std::abs(i - j); }
inline double hamming(int i, int j) { return i == j ? 0.0 : 1.0; }
inline double euclid(int i, int j) { return double(i - j) * double(i - j); }

inline std::vector<double> marginal(const Codes& c, int n) {
    std::vector<double> p(n + 1, 0.0);
    for (int x : c) p[x] += 1.0;
    for (auto& v : p) v /= double(c.size());
    return p;
}

inline double cumulative(const Codes& c, int i) {
    double k = 0;
    for (int x : c) k += x <= i;
    return k / double(c.size());
}

inline double joint(const Codes& c, int i, int j, int lag) {
    double k = 0;
    for (std::size_t t = 0; t + lag < c.size(); ++t) k += c[t] == i && c[t + lag] == j;
    return k / double(c.size() - lag);
}

inline double cumulative_joint(const Codes& c, int i, int j, int lag) {
    double k = 0;
    for (std::size_t t = 0; t + lag < c.size(); ++t) k += c[t] <= i && c[t + lag] <= j;
    return k / double(c.size() - lag);
}

/// Mean distance over all ordered pairs of observations (independent copies).
inline double divc(const Codes& c, const Dist& d) {
    double s = 0;
    for (int a : c)
        for (int b : c) s += d(a, b);
    return s / (double(c.size()) * double(c.size()));
}

/// Mean distance between an observation and the reflection of another.
inline double reflected(const Codes& c, int n, const Dist& d) {
    double s = 0;
    for (int a : c)
        for (int b : c) s += d(a, n - b);
    return s / (double(c.size()) * double(c.size()));
}

inline double mean_distance_to(const Codes& c, int state, const Dist& d) {
    double s = 0;
    for (int a : c) s += d(a, state);
    return s / double(c.size());
}

inline double lagged_distance(const Codes& c, int lag, const Dist& d) {
    if (lag == 0) return 0.0;
    double s = 0;
    for (std::size_t t = lag; t < c.size(); ++t) s += d(c[t], c[t - lag]);
    return s / double(c.size() - lag);
}

inline double kappa(const Codes& c, int lag, const Dist& d) {
    const double disp = divc(c, d);
    return (disp - lagged_distance(c, lag, d)) / disp;
}

/// Correlation of binarization columns with full-T marginals and the T-l
/// window joint.
inline double psi(const Codes& c, int i, int j, int lag) {
    const double fi = cumulative(c, i), fj = cumulative(c, j);
    return (cumulative_joint(c, i, j, lag) - fi * fj) / std::sqrt(fi * (1 - fi) * fj * (1 - fj));
}

inline std::vector<double> holm(const std::vector<double>& p) {
    const std::size_t m = p.size();
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return p[a] < p[b]; });
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        double best = 0;
        for (std::size_t j = 0; j <= k; ++j) best = std::max(best, std::min(1.0, double(m - j) * p[idx[j]]));
        out[idx[k]] = best;
    }
    return out;
}

/// ARI from pair counts: same/same, same/diff, diff/same, diff/diff.
inline double ari(const std::vector<int>& a, const std::vector<int>& b) {
    double ss = 0, sd = 0, ds = 0, dd = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const bool x = a[i] == a[j], y = b[i] == b[j];
            (x ? (y ? ss : sd) : (y ? ds : dd)) += 1;
        }
    return 2 * (ss * dd - sd * ds) / ((ss + sd) * (sd + dd) + (ss + ds) * (ds + dd));
}

inline Codes random_codes(std::mt19937_64& g, int n, int length) {
    std::uniform_int_distribution<int> u(0, n);
    Codes c(length);
    for (auto& x : c) x = u(g);
    return c;
}

/// Random codes with a random, often lopsided, marginal.
inline Codes random_skewed_codes(std::mt19937_64& g, int n, int length) {
    std::vector<double> w(n + 1);
    std::exponential_distribution<double> e(1.0);
    for (auto& x : w) x = e(g);
    std::discrete_distribution<int> dd(w.begin(), w.end());
    Codes c(length);
    for (auto& x : c) x = dd(g);
    return c;
}

}  // namespace oracle
