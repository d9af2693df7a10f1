#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcast {

/// Bad configuration: unusable config file, contradictory options, parameter
/// values outside their documented range.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input data: malformed CSV cells, calendar gaps, misaligned series,
/// values outside a transform's domain.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: rank-deficient designs, zero-variance columns,
/// degenerate tuning problems.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rank deficiency detected while solving a least-squares problem. Carries
/// the first column whose pivot fell below the rank threshold.
class SingularityError : public NumericError {
public:
    SingularityError(const std::string& message, std::ptrdiff_t column)
        : NumericError(message), column_(column) {}

    /// Zero-based index of the offending design column (-1 when unknown).
    [[nodiscard]] std::ptrdiff_t column() const noexcept { return column_; }

private:
    std::ptrdiff_t column_;
};

/// Iterative solver hit its sweep cap before meeting the tolerance. Carries
/// the last observed coefficient change for diagnostics.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& message, double last_delta)
        : NumericError(message), last_delta_(last_delta) {}

    [[nodiscard]] double last_delta() const noexcept { return last_delta_; }

private:
    double last_delta_;
};

}  // namespace qcast
