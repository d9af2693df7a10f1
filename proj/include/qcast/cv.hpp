#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcast/frame.hpp"
#include "qcast/matrix.hpp"
#include "qcast/models.hpp"
#include "qcast/period.hpp"
#include "qcast/tuning.hpp"

namespace qcast {

/// One rolling-origin fold: train on the contiguous rows
/// [train_start, train_end] and predict the single row test_index.
struct Fold {
    std::size_t train_start = 0;
    std::size_t train_end = 0;    ///< inclusive
    std::size_t test_index = 0;   ///< == train_end + 1
};

/// Fixed-size rolling window over n observations producing k one-step-ahead
/// folds, each trained on the m = n - k rows immediately preceding its test
/// row. Fold j tests row m + j; the last fold tests the final observation.
struct FoldPlan {
    std::vector<Fold> folds;
    std::size_t train_size = 0;  ///< m
    std::size_t fold_count = 0;  ///< k
};

/// Builds the plan above. Requires 2 <= k <= n - 3 so every training window
/// keeps at least three observations.
[[nodiscard]] FoldPlan make_fold_plan(std::size_t n, std::size_t k);

/// One model entry of a comparison run.
struct ModelConfig {
    std::string name;
    ModelKind kind = ModelKind::Ols;

    // Penalised kinds only.
    double alpha = 1.0;                     ///< 1 = ridge, 0 = LASSO (see PenaltySpec)
    std::optional<double> fixed_lambda;     ///< bypasses tuning when set
    LambdaRule rule = LambdaRule::CvMin;
    TuningConfig tuning;
    bool retune_each_fold = true;           ///< false: tune once on the first window

    // PLS only.
    std::size_t pls_directions = 1;
};

/// Outcome of one fold for one model. Failed fits leave an explicit gap:
/// valid = false with the error text, never a silently imputed number.
struct FoldOutcome {
    bool valid = false;
    double prediction = 0.0;
    double actual = 0.0;
    std::string failure;
    std::optional<double> lambda_used;  ///< penalised kinds
};

/// Per-model results across all folds. Aggregates are only reported when
/// every fold is valid; otherwise mae/rmse are empty and the cumulative
/// path is left empty.
struct ModelReport {
    std::string name;
    std::string kind;  ///< "ols", "ridge", ..., "median_ensemble"
    std::vector<FoldOutcome> folds;

    std::optional<double> mae;
    std::optional<double> rmse;
    Vector cumulative_abs_errors;

    [[nodiscard]] bool complete() const {
        for (const auto& f : folds) {
            if (!f.valid) return false;
        }
        return !folds.empty();
    }
};

/// Full comparison run: the shared test calendar plus one report per model.
struct CvReport {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t m = 0;
    std::vector<Period> test_periods;
    Vector actuals;
    std::vector<ModelReport> models;

    // Filled by the pipeline for report emission.
    std::string config_digest;
    std::optional<Period> split_at;
};

/// Runs every configured model over the plan. Each fold fits on its training
/// window only and predicts the held-out row from that quarter's predictor
/// values. Per-fold fit failures are recorded on the outcome; configuration
/// problems (duplicate names, PLS directions exceeding q, penalised models
/// without predictors) throw ConfigError up front. `threads` > 1 distributes
/// folds across workers; results are assembled in fold order so output is
/// identical for any thread count.
[[nodiscard]] CvReport run_cv(const SeriesFrame& frame, const std::vector<ModelConfig>& models,
                              const FoldPlan& plan, unsigned threads = 1);

/// Mean absolute error.
[[nodiscard]] double mae(std::span<const double> errors);

/// Root mean squared error; never smaller than the MAE of the same errors.
[[nodiscard]] double rmse(std::span<const double> errors);

/// Running sum of |error| in fold order; the final entry equals k * MAE.
[[nodiscard]] Vector cumulative_abs_error(std::span<const double> errors);

/// Combines member models fold-by-fold through the median of their
/// predictions. Members must name models present in the report with every
/// fold valid; unknown names raise ConfigError, incomplete members
/// NumericError.
[[nodiscard]] ModelReport median_ensemble(const CvReport& report, const std::string& name,
                                          const std::vector<std::string>& members);

}  // namespace qcast
