#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcast/cv.hpp"
#include "qcast/period.hpp"
#include "qcast/synth.hpp"
#include "qcast/transform.hpp"

namespace qcast {

/// A model built fold-by-fold from other models' predictions.
struct EnsembleConfig {
    std::string name;
    std::vector<std::string> members;
};

/// Everything an end-to-end comparison run needs. Parsed from a flat
/// key-value file with [transform NAME] and [model NAME] sections; input
/// paths are resolved relative to the config file, output paths relative to
/// the working directory.
struct RunConfig {
    std::filesystem::path dataset;
    std::string response;
    std::map<std::string, TransformSpec> transforms;
    HampelConfig hampel;

    std::size_t folds = 0;
    std::optional<Period> split_at;  ///< optional pre/post comparison marker

    std::vector<ModelConfig> models;
    std::vector<EnsembleConfig> ensembles;

    std::filesystem::path output_dir = "out";
    unsigned threads = 1;
};

/// A scenario file: generator recipe plus where to write the CSV.
struct ScenarioRun {
    ScenarioSpec spec;
    std::filesystem::path output;
};

/// Parses and validates a run config. Unknown keys or sections, missing
/// required keys, out-of-range values, and ensemble members that do not name
/// a configured model all raise ConfigError with the offending line.
[[nodiscard]] RunConfig parse_run_config(const std::filesystem::path& path);

/// Parses and validates a scenario config (same file syntax, flat keys).
[[nodiscard]] ScenarioRun parse_scenario_config(const std::filesystem::path& path);

/// Stable fingerprint of the run semantics (FNV-1a over a canonical field
/// dump), embedded in report.json so outputs are traceable to their config.
[[nodiscard]] std::string config_digest(const RunConfig& config);

}  // namespace qcast
