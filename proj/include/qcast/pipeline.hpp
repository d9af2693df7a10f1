#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qcast/config.hpp"
#include "qcast/cv.hpp"
#include "qcast/report.hpp"

namespace qcast {

/// Outcome of an end-to-end run: the in-memory report plus the files written.
struct PipelineResult {
    CvReport report;
    std::vector<std::filesystem::path> files;
};

/// Loads the dataset, builds the frame, runs every configured model over the
/// rolling-origin plan, appends the configured ensembles, and writes the
/// report files into config.output_dir.
[[nodiscard]] PipelineResult run_pipeline(const RunConfig& config);

/// What `validate` prints: the frame and plan a config would produce,
/// without fitting anything.
struct ValidationSummary {
    std::size_t raw_rows = 0;
    std::size_t frame_rows = 0;
    std::size_t predictors = 0;
    std::size_t folds = 0;
    std::size_t train_size = 0;
    Period first_test{};
    Period last_test{};
    std::vector<std::pair<std::string, std::size_t>> outliers;  ///< per column, response first
    std::vector<std::string> model_names;
};

/// Runs every check run_pipeline would run before fitting: config
/// consistency, dataset ingestion, frame building, fold-plan feasibility,
/// split-marker placement.
[[nodiscard]] ValidationSummary validate_run(const RunConfig& config);

}  // namespace qcast
