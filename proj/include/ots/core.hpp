#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ots {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ordered categorical range s_0 < s_1 < ... < s_n. Computation only ever
/// uses the indices 0..n; labels are for display and I/O.
class StateSpace {
public:
    /// States labelled "0", "1", ..., "count-1".
    explicit StateSpace(int count);
    explicit StateSpace(std::vector<std::string> labels);

    int size() const noexcept { return static_cast<int>(labels_.size()); }
    /// Largest code n (size() - 1).
    int n() const noexcept { return size() - 1; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(int code) const { return labels_.at(static_cast<std::size_t>(code)); }
    /// Code of a label; throws ValidationError for unknown labels.
    int code_of(std::string_view label) const;

    friend bool operator==(const StateSpace&, const StateSpace&) = default;

private:
    std::vector<std::string> labels_;
};

enum class DistanceKind { Hamming, Block, Euclidean, Custom };

std::string_view to_string(DistanceKind kind);
/// Case-insensitive; accepts "hamming", "block", "euclidean", "custom".
DistanceKind parse_distance_kind(std::string_view name);

/// Pairwise distance matrix D over the states, d_ij = d(s_i, s_j).
class StateDistance {
public:
    DistanceKind kind() const noexcept { return kind_; }
    const Matrix& matrix() const noexcept { return d_; }
    double operator()(int i, int j) const { return d_(i, j); }
    int size() const noexcept { return static_cast<int>(d_.rows()); }
    int n() const noexcept { return size() - 1; }
    /// d(s_0, s_n).
    double d0n() const noexcept { return d_(0, size() - 1); }
    /// d(s_0, s_n) is the largest entry.
    bool maximization() const noexcept { return maximization_; }
    /// d(s_i, s_j) == d(s_{n-i}, s_{n-j}) for all i, j.
    bool centrosymmetric() const noexcept { return centrosymmetric_; }

private:
    friend StateDistance build_state_distance(DistanceKind, const StateSpace&,
                                              const std::optional<Matrix>&);
    StateDistance(DistanceKind kind, Matrix d);

    DistanceKind kind_;
    Matrix d_;
    bool maximization_ = false;
    bool centrosymmetric_ = false;
};

/// Builds one of the standard distances (Hamming 1-delta_ij, Block |i-j|,
/// Euclidean (i-j)^2) or validates a user supplied matrix for Custom.
StateDistance build_state_distance(DistanceKind kind, const StateSpace& space,
                                   const std::optional<Matrix>& custom = std::nullopt);

/// True iff the symmetric part of (J - I) D is positive semidefinite, J being
/// the counteridentity. Tolerance is 1e-9 relative to the largest eigenvalue
/// magnitude.
bool validate_asymmetry_assumption(const StateDistance& dist);

/// A realization stored as integer count codes in [0, n]. The state space is
/// carried along so that unvisited states still count.
class OrdinalSeries {
public:
    OrdinalSeries(std::vector<int> codes, StateSpace space);
    /// Maps labels to codes through the state space.
    static OrdinalSeries from_labels(std::span<const std::string> labels, StateSpace space);

    std::span<const int> codes() const noexcept { return codes_; }
    int operator[](std::size_t t) const { return codes_[t]; }
    std::size_t length() const noexcept { return codes_.size(); }
    const StateSpace& state_space() const noexcept { return space_; }
    int n() const noexcept { return space_.n(); }

    std::vector<std::string> to_labels() const;
    /// Code reversal C -> n - C.
    OrdinalSeries reflected() const;
    /// Time reversal.
    OrdinalSeries time_reversed() const;

    friend bool operator==(const OrdinalSeries&, const OrdinalSeries&) = default;

private:
    std::vector<int> codes_;
    StateSpace space_;
};

/// Real-valued companion series for the mixed correlation measures.
class NumericSeries {
public:
    explicit NumericSeries(std::vector<double> values);
    std::span<const double> values() const noexcept { return values_; }
    std::size_t length() const noexcept { return values_.size(); }
    double operator[](std::size_t t) const { return values_[t]; }

private:
    std::vector<double> values_;
};

/// A named collection of series over one state space, optionally labelled.
class OtsDataset {
public:
    OtsDataset(std::string name, StateSpace space, std::vector<OrdinalSeries> series,
               std::optional<std::vector<int>> labels = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    const StateSpace& state_space() const noexcept { return space_; }
    const std::vector<OrdinalSeries>& series() const noexcept { return series_; }
    std::size_t size() const noexcept { return series_.size(); }
    const OrdinalSeries& operator[](std::size_t i) const { return series_.at(i); }
    const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }

private:
    std::string name_;
    StateSpace space_;
    std::vector<OrdinalSeries> series_;
    std::optional<std::vector<int>> labels_;
};

}  // namespace ots
