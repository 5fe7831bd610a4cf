#pragma once

#include <stdexcept>
#include <string>

namespace ots {

/// Raised when an input violates a documented precondition (bad codes,
/// malformed matrices, lags out of range, degenerate series). The CLI maps
/// these to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A statistic is undefined for this input, e.g. a constant series has zero
/// dispersion so kappa cannot be formed.
class DegenerateError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Operation requested for a distance it does not support.
class UnsupportedDistanceError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace ots
