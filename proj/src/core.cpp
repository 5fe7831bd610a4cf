#include "ots/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "ots/errors.hpp"

namespace ots {

namespace {

std::vector<std::string> numeric_labels(int count) {
    if (count < 2) throw ValidationError("a state space needs at least two states");
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) labels.push_back(std::to_string(i));
    return labels;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

StateSpace::StateSpace(int count) : labels_(numeric_labels(count)) {}

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw ValidationError("a state space needs at least two states");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw ValidationError("state labels must be distinct");
}

int StateSpace::code_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw ValidationError("unknown state label '" + std::string(label) + "'");
    return static_cast<int>(it - labels_.begin());
}

std::string_view to_string(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::Hamming: return "Hamming";
        case DistanceKind::Block: return "Block";
        case DistanceKind::Euclidean: return "Euclidean";
        case DistanceKind::Custom: return "Custom";
    }
    return "?";
}

DistanceKind parse_distance_kind(std::string_view name) {
    const auto s = lower(name);
    if (s == "hamming") return DistanceKind::Hamming;
    if (s == "block") return DistanceKind::Block;
    if (s == "euclidean") return DistanceKind::Euclidean;
    if (s == "custom") return DistanceKind::Custom;
    throw ValidationError("unknown distance '" + std::string(name) + "'");
}

StateDistance::StateDistance(DistanceKind kind, Matrix d) : kind_(kind), d_(std::move(d)) {
    const int m = size();
    const int n = m - 1;
    maximization_ = d_.maxCoeff() <= d0n();
    centrosymmetric_ = true;
    for (int i = 0; i < m && centrosymmetric_; ++i)
        for (int j = 0; j < m; ++j)
            if (d_(i, j) != d_(n - i, n - j)) {
                centrosymmetric_ = false;
                break;
            }
}

StateDistance build_state_distance(DistanceKind kind, const StateSpace& space,
                                   const std::optional<Matrix>& custom) {
    const int m = space.size();
    if (kind != DistanceKind::Custom) {
        if (custom) throw ValidationError("a custom matrix is only accepted with kind=Custom");
        Matrix d(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double diff = std::abs(i - j);
                switch (kind) {
                    case DistanceKind::Hamming: d(i, j) = i == j ? 0.0 : 1.0; break;
                    case DistanceKind::Block: d(i, j) = diff; break;
                    default: d(i, j) = diff * diff; break;
                }
            }
        return StateDistance(kind, std::move(d));
    }

    if (!custom) throw ValidationError("kind=Custom requires a distance matrix");
    const Matrix& d = *custom;
    if (d.rows() != m || d.cols() != m)
        throw ValidationError("custom distance matrix must be " + std::to_string(m) + "x" +
                              std::to_string(m));
    for (int i = 0; i < m; ++i) {
        if (d(i, i) != 0.0) throw ValidationError("custom distance matrix needs a zero diagonal");
        for (int j = 0; j < m; ++j) {
            if (!std::isfinite(d(i, j)) || d(i, j) < 0.0)
                throw ValidationError("custom distance entries must be finite and nonnegative");
            if (d(i, j) != d(j, i)) throw ValidationError("custom distance matrix must be symmetric");
        }
    }
    return StateDistance(kind, d);
}

bool validate_asymmetry_assumption(const StateDistance& dist) {
    const int m = dist.size();
    const Matrix counter = Matrix::Identity(m, m).rowwise().reverse();
    const Matrix a = (counter - Matrix::Identity(m, m)) * dist.matrix();
    const Matrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    return ev.minCoeff() >= -1e-9 * scale;
}

OrdinalSeries::OrdinalSeries(std::vector<int> codes, StateSpace space)
    : codes_(std::move(codes)), space_(std::move(space)) {
    if (codes_.empty()) throw ValidationError("a series needs at least one observation");
    const int n = space_.n();
    for (std::size_t t = 0; t < codes_.size(); ++t)
        if (codes_[t] < 0 || codes_[t] > n)
            throw ValidationError("code " + std::to_string(codes_[t]) + " at position " +
                                  std::to_string(t + 1) + " is outside [0, " + std::to_string(n) +
                                  "]");
}

OrdinalSeries OrdinalSeries::from_labels(std::span<const std::string> labels, StateSpace space) {
    std::vector<int> codes;
    codes.reserve(labels.size());
    for (const auto& l : labels) codes.push_back(space.code_of(l));
    return OrdinalSeries(std::move(codes), std::move(space));
}

std::vector<std::string> OrdinalSeries::to_labels() const {
    std::vector<std::string> out;
    out.reserve(codes_.size());
    for (int c : codes_) out.push_back(space_.label(c));
    return out;
}

OrdinalSeries OrdinalSeries::reflected() const {
    std::vector<int> r(codes_.size());
    const int n = space_.n();
    std::transform(codes_.begin(), codes_.end(), r.begin(), [n](int c) { return n - c; });
    return OrdinalSeries(std::move(r), space_);
}

OrdinalSeries OrdinalSeries::time_reversed() const {
    return OrdinalSeries(std::vector<int>(codes_.rbegin(), codes_.rend()), space_);
}

NumericSeries::NumericSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw ValidationError("a numeric series needs at least one observation");
    for (double v : values_)
        if (!std::isfinite(v)) throw ValidationError("numeric series values must be finite");
}

OtsDataset::OtsDataset(std::string name, StateSpace space, std::vector<OrdinalSeries> series,
                       std::optional<std::vector<int>> labels)
    : name_(std::move(name)), space_(std::move(space)), series_(std::move(series)),
      labels_(std::move(labels)) {
    for (std::size_t i = 0; i < series_.size(); ++i)
        if (!(series_[i].state_space() == space_))
            throw ValidationError("series " + std::to_string(i + 1) +
                                  " does not share the dataset state space");
    if (labels_ && labels_->size() != series_.size())
        throw ValidationError("dataset needs exactly one class label per series");
}

}  // namespace ots
