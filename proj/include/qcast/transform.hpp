#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "qcast/frame.hpp"
#include "qcast/matrix.hpp"

namespace qcast {

/// Stationarity transform applied to a raw level series before modeling.
enum class TransformKind {
    Log100,       ///< 100 * ln(level); levels must be strictly positive
    LevelOffset,  ///< level - offset (e.g. survey balances centered at 100 or 50)
    Percent,      ///< level used as a percentage reading, taken as-is
    Identity,     ///< level passed through unchanged
};

/// Per-series recipe: a level transform plus an optional quarter-on-quarter
/// first difference (which shortens the series by one observation).
struct TransformSpec {
    TransformKind kind = TransformKind::Identity;
    double offset = 0.0;      ///< only read for LevelOffset
    bool difference = false;  ///< apply first difference after the level map
};

/// Centered-window median filter configuration. Windows are truncated at the
/// sample edges. An observation further than n_mad * MAD from its window
/// median is clamped to the nearest edge of that band; MAD carries no
/// consistency factor, and a zero MAD clamps deviants to the median itself.
struct HampelConfig {
    std::size_t window = 19;  ///< odd, >= 3
    double n_mad = 2.5;       ///< > 0; +infinity effectively disables clamping
};

struct HampelResult {
    Vector values;
    std::vector<std::uint8_t> flags;  ///< 1 where the filter clamped
};

/// Maps a level series through `spec`. Log100 rejects non-positive levels
/// with a DataError naming the offending position; differencing requires at
/// least two observations.
[[nodiscard]] Vector apply_transform(std::span<const double> levels, const TransformSpec& spec);

/// Outlier clamp described on HampelConfig. Never errors on valid config;
/// unflagged observations are returned bit-identically.
[[nodiscard]] HampelResult hampel_filter(std::span<const double> values, const HampelConfig& config);

/// Builds the model-ready frame: validates coverage (no missing cells, no
/// calendar misalignment), applies per-series transforms, aligns series when
/// differencing shortens some of them, then runs the outlier filter on every
/// column. `specs` must contain exactly the table's columns; `response` names
/// the target. Column order of the predictors follows the table.
[[nodiscard]] SeriesFrame build_frame(const RawTable& table,
                                      const std::map<std::string, TransformSpec>& specs,
                                      const std::string& response,
                                      const HampelConfig& hampel);

/// Parses "log100" / "level_offset" / "percent" / "identity".
[[nodiscard]] TransformKind transform_kind_from_string(std::string_view name);
[[nodiscard]] std::string to_string(TransformKind kind);

}  // namespace qcast
