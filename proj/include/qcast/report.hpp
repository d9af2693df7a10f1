#pragma once

#include <filesystem>
#include <vector>

#include "qcast/cv.hpp"

namespace qcast {

/// Writes the run outputs into `directory` (created if needed):
///
///  - report.json        summary metrics per model plus run metadata
///  - errors_by_fold.csv period, actual, and one prediction column per model
///                       (failed folds are empty cells)
///  - cumabs.csv         running cumulative absolute error per model
///  - cumabs_pre.csv / cumabs_post.csv when the report carries a split
///    marker, with the running sums restarted inside each sub-window
///
/// Every metric in report.json can be recomputed from errors_by_fold.csv.
/// Returns the paths written. On any write failure the partial outputs are
/// removed and DataError is raised.
std::vector<std::filesystem::path> emit_report(const CvReport& report,
                                               const std::filesystem::path& directory);

}  // namespace qcast
