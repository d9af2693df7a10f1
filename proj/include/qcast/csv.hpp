#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "qcast/frame.hpp"

namespace qcast {

/// Formats a double with 17 significant digits — enough for an exact
/// round trip through text.
[[nodiscard]] std::string format_double(double value);

/// Reads a quarterly dataset: header "period,<name>,...", one row per
/// quarter, strictly consecutive periods. Empty cells become NaN (and are
/// rejected later by frame building); anything unparsable raises DataError
/// naming the row and column. Rows are numbered from 1 including the header.
[[nodiscard]] RawTable ingest_csv(const std::filesystem::path& path);
[[nodiscard]] RawTable ingest_csv(std::istream& in, const std::string& origin);

/// Writes a frame back out in the same format (period, response, then the
/// predictors), with format_double cells.
void write_frame_csv(const SeriesFrame& frame, const std::filesystem::path& path);

}  // namespace qcast
