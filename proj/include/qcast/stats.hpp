#pragma once

#include <span>

namespace qcast {

/// Arithmetic mean. Throws std::invalid_argument on empty input.
[[nodiscard]] double mean(std::span<const double> values);

/// Sample variance (n - 1 divisor). Requires at least two values.
[[nodiscard]] double variance(std::span<const double> values);

/// Sample covariance (n - 1 divisor). Inputs must have equal length >= 2.
[[nodiscard]] double covariance(std::span<const double> a, std::span<const double> b);

/// Median. Even-length inputs average the two central order statistics.
[[nodiscard]] double median(std::span<const double> values);

/// Median absolute deviation from the median. No consistency factor is
/// applied; callers that want a sigma estimate must scale it themselves.
[[nodiscard]] double mad(std::span<const double> values);

}  // namespace qcast
