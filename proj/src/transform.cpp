#include "qcast/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcast/errors.hpp"
#include "qcast/stats.hpp"

namespace qcast {

namespace {

void validate_hampel(const HampelConfig& config) {
    if (config.window < 3 || config.window % 2 == 0) {
        throw std::invalid_argument("hampel_filter: window must be odd and >= 3");
    }
    if (!(config.n_mad > 0.0)) {
        throw std::invalid_argument("hampel_filter: n_mad must be positive");
    }
}

}  // namespace

Vector apply_transform(std::span<const double> levels, const TransformSpec& spec) {
    if (levels.empty()) {
        throw std::invalid_argument("apply_transform: empty input");
    }
    if (spec.difference && levels.size() < 2) {
        throw std::invalid_argument("apply_transform: differencing needs at least two observations");
    }

    Vector out(levels.size());
    switch (spec.kind) {
        case TransformKind::Log100:
            for (std::size_t i = 0; i < levels.size(); ++i) {
                if (!(levels[i] > 0.0)) {
                    throw DataError("log transform requires positive levels; found " +
                                    std::to_string(levels[i]) + " at position " + std::to_string(i));
                }
                out[i] = 100.0 * std::log(levels[i]);
            }
            break;
        case TransformKind::LevelOffset:
            for (std::size_t i = 0; i < levels.size(); ++i) {
                out[i] = levels[i] - spec.offset;
            }
            break;
        case TransformKind::Percent:
        case TransformKind::Identity:
            std::copy(levels.begin(), levels.end(), out.begin());
            break;
    }

    if (spec.difference) {
        Vector diffed(out.size() - 1);
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            diffed[i] = out[i + 1] - out[i];
        }
        return diffed;
    }
    return out;
}

HampelResult hampel_filter(std::span<const double> values, const HampelConfig& config) {
    validate_hampel(config);

    const std::size_t n = values.size();
    HampelResult result;
    result.values.assign(values.begin(), values.end());
    result.flags.assign(n, 0);

    const std::size_t half = config.window / 2;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t > half ? t - half : 0;
        const std::size_t hi = std::min(n - 1, t + half);
        const std::span<const double> window = values.subspan(lo, hi - lo + 1);
        const double center = median(window);
        const double spread = mad(window);
        const double band = config.n_mad * spread;
        const double deviation = values[t] - center;
        if (std::abs(deviation) > band) {
            result.values[t] = deviation > 0.0 ? center + band : center - band;
            result.flags[t] = 1;
        }
    }
    return result;
}

TransformKind transform_kind_from_string(std::string_view name) {
    if (name == "log100") return TransformKind::Log100;
    if (name == "level_offset") return TransformKind::LevelOffset;
    if (name == "percent") return TransformKind::Percent;
    if (name == "identity") return TransformKind::Identity;
    throw ConfigError("unknown transform kind '" + std::string(name) +
                      "'; expected log100, level_offset, percent, or identity");
}

std::string to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::Log100: return "log100";
        case TransformKind::LevelOffset: return "level_offset";
        case TransformKind::Percent: return "percent";
        case TransformKind::Identity: return "identity";
    }
    return "identity";
}

SeriesFrame build_frame(const RawTable& table,
                        const std::map<std::string, TransformSpec>& specs,
                        const std::string& response,
                        const HampelConfig& hampel) {
    validate_hampel(hampel);

    const std::size_t n_raw = table.periods.size();
    if (n_raw == 0) {
        throw DataError("build_frame: table has no rows");
    }
    if (table.names.size() != table.columns.size()) {
        throw std::invalid_argument("build_frame: names/columns size mismatch");
    }
    if (table.find(response) < 0) {
        throw ConfigError("response series '" + response + "' is not a column of the dataset");
    }
    for (const auto& name : table.names) {
        if (!specs.contains(name)) {
            throw ConfigError("no transform configured for series '" + name + "'");
        }
    }
    for (const auto& [name, spec] : specs) {
        (void)spec;
        if (table.find(name) < 0) {
            throw ConfigError("transform configured for unknown series '" + name + "'");
        }
    }

    // Coverage: every column must be fully populated over the table calendar.
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        const Vector& col = table.columns[c];
        if (col.size() != n_raw) {
            throw std::invalid_argument("build_frame: column '" + table.names[c] +
                                        "' length does not match the calendar");
        }
        std::ptrdiff_t first = -1;
        std::ptrdiff_t last = -1;
        for (std::size_t i = 0; i < n_raw; ++i) {
            if (!std::isnan(col[i])) {
                if (first < 0) first = static_cast<std::ptrdiff_t>(i);
                last = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (first != 0 || last != static_cast<std::ptrdiff_t>(n_raw - 1)) {
            throw DataError("series '" + table.names[c] +
                            "' does not cover the full calendar " + table.periods.front().str() +
                            ".." + table.periods.back().str() + " (misaligned series)");
        }
        for (std::size_t i = 0; i < n_raw; ++i) {
            if (std::isnan(col[i])) {
                throw DataError("gap in series '" + table.names[c] + "' at " +
                                table.periods[i].str());
            }
            if (!std::isfinite(col[i])) {
                throw DataError("non-finite value in series '" + table.names[c] + "' at " +
                                table.periods[i].str());
            }
        }
    }

    // Transform each column; differenced series come back one observation
    // short and force the common calendar to start one quarter later.
    bool any_differenced = false;
    for (const auto& name : table.names) {
        if (specs.at(name).difference) {
            any_differenced = true;
            break;
        }
    }
    const std::size_t offset = any_differenced ? 1 : 0;
    if (n_raw <= offset) {
        throw DataError("build_frame: differencing leaves no observations");
    }
    const std::size_t n = n_raw - offset;

    std::vector<Vector> transformed(table.names.size());
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        const TransformSpec& spec = specs.at(table.names[c]);
        Vector t;
        try {
            t = apply_transform(table.columns[c], spec);
        } catch (const DataError& e) {
            throw DataError("series '" + table.names[c] + "': " + e.what());
        }
        // Align: drop leading values so every column starts at the common
        // calendar origin.
        const std::size_t drop = t.size() - n;
        transformed[c].assign(t.begin() + static_cast<std::ptrdiff_t>(drop), t.end());
    }

    SeriesFrame frame;
    frame.periods.assign(table.periods.begin() + static_cast<std::ptrdiff_t>(offset),
                         table.periods.end());
    frame.response_name = response;

    const std::size_t q = table.names.size() - 1;
    frame.predictors = Matrix(n, q);
    frame.predictor_names.reserve(q);
    frame.predictor_outliers.reserve(q);

    std::size_t out_col = 0;
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        HampelResult filtered = hampel_filter(transformed[c], hampel);
        if (table.names[c] == response) {
            frame.response = std::move(filtered.values);
            frame.response_outliers = std::move(filtered.flags);
        } else {
            frame.predictor_names.push_back(table.names[c]);
            for (std::size_t r = 0; r < n; ++r) {
                frame.predictors(r, out_col) = filtered.values[r];
            }
            frame.predictor_outliers.push_back(std::move(filtered.flags));
            ++out_col;
        }
    }
    return frame;
}

}  // namespace qcast
