#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcast/matrix.hpp"
#include "qcast/period.hpp"

namespace qcast {

/// Raw level series on a shared quarterly calendar, straight from ingestion.
/// Missing cells are NaN; downstream frame building rejects them.
struct RawTable {
    std::vector<Period> periods;
    std::vector<std::string> names;  ///< column order as ingested
    std::vector<Vector> columns;     ///< one per name, each periods.size() long

    /// Index of a named column, or -1.
    [[nodiscard]] std::ptrdiff_t find(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) {
                return static_cast<std::ptrdiff_t>(i);
            }
        }
        return -1;
    }
};

/// Model-ready dataset: one response and q predictor columns on a common
/// quarterly index, already transformed and outlier-filtered. Outlier flags
/// mark the observations the filter clamped.
struct SeriesFrame {
    std::vector<Period> periods;

    std::string response_name;
    Vector response;

    std::vector<std::string> predictor_names;
    Matrix predictors;  ///< n x q, column order matches predictor_names

    std::vector<std::uint8_t> response_outliers;               ///< length n
    std::vector<std::vector<std::uint8_t>> predictor_outliers; ///< q vectors of length n

    [[nodiscard]] std::size_t n() const noexcept { return response.size(); }
    [[nodiscard]] std::size_t q() const noexcept { return predictors.cols(); }
};

}  // namespace qcast
