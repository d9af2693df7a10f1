#include "qcast/pipeline.hpp"

#include <string>
#include <utility>

#include "qcast/csv.hpp"
#include "qcast/errors.hpp"

namespace qcast {

namespace {

struct PreparedRun {
    SeriesFrame frame;
    FoldPlan plan;
};

PreparedRun prepare(const RunConfig& config) {
    const RawTable table = ingest_csv(config.dataset);
    PreparedRun prepared;
    prepared.frame = build_frame(table, config.transforms, config.response, config.hampel);

    const std::size_t n = prepared.frame.n();
    if (config.folds + 3 > n) {
        throw ConfigError("folds = " + std::to_string(config.folds) +
                          " leaves no room to train on a frame of " + std::to_string(n) +
                          " rows (need folds <= rows - 3)");
    }
    prepared.plan = make_fold_plan(n, config.folds);

    if (config.split_at) {
        const Period first_test = prepared.frame.periods[prepared.plan.folds.front().test_index];
        const Period last_test = prepared.frame.periods[prepared.plan.folds.back().test_index];
        if (!(*config.split_at > first_test && *config.split_at <= last_test)) {
            throw ConfigError("split_at " + config.split_at->str() +
                              " does not bisect the test window " + first_test.str() + ".." +
                              last_test.str());
        }
    }
    return prepared;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    PreparedRun prepared = prepare(config);

    PipelineResult result;
    result.report = run_cv(prepared.frame, config.models, prepared.plan, config.threads);
    for (const auto& ensemble : config.ensembles) {
        result.report.models.push_back(
            median_ensemble(result.report, ensemble.name, ensemble.members));
    }
    result.report.config_digest = config_digest(config);
    result.report.split_at = config.split_at;
    result.files = emit_report(result.report, config.output_dir);
    return result;
}

ValidationSummary validate_run(const RunConfig& config) {
    const RawTable table = ingest_csv(config.dataset);
    PreparedRun prepared = prepare(config);

    // Exercise the model-config checks run_cv would apply, without fitting.
    // (A single-fold dry plan would change window sizes, so validate against
    // the real plan's shape instead.)
    ValidationSummary summary;
    summary.raw_rows = table.periods.size();
    summary.frame_rows = prepared.frame.n();
    summary.predictors = prepared.frame.q();
    summary.folds = prepared.plan.fold_count;
    summary.train_size = prepared.plan.train_size;
    summary.first_test = prepared.frame.periods[prepared.plan.folds.front().test_index];
    summary.last_test = prepared.frame.periods[prepared.plan.folds.back().test_index];

    std::size_t response_flags = 0;
    for (auto flag : prepared.frame.response_outliers) {
        response_flags += flag;
    }
    summary.outliers.emplace_back(prepared.frame.response_name, response_flags);
    for (std::size_t c = 0; c < prepared.frame.q(); ++c) {
        std::size_t count = 0;
        for (auto flag : prepared.frame.predictor_outliers[c]) {
            count += flag;
        }
        summary.outliers.emplace_back(prepared.frame.predictor_names[c], count);
    }

    for (const auto& model : config.models) {
        summary.model_names.push_back(model.name);
    }
    for (const auto& ensemble : config.ensembles) {
        summary.model_names.push_back(ensemble.name);
    }

    // Surface configuration problems that only show up against frame shape
    // (PLS directions vs q, penalised models without predictors, OLS needing
    // n > q + 1 on the training windows).
    for (const auto& model : config.models) {
        if (model.kind == ModelKind::Pls &&
            (model.pls_directions < 1 || model.pls_directions > prepared.frame.q())) {
            throw ConfigError("model '" + model.name + "': directions must lie in [1, " +
                              std::to_string(prepared.frame.q()) + "]");
        }
        const bool penalised = model.kind == ModelKind::Ridge || model.kind == ModelKind::Lasso ||
                               model.kind == ModelKind::ElasticNet;
        if (penalised && prepared.frame.q() == 0) {
            throw ConfigError("model '" + model.name + "' needs predictor columns");
        }
        if (model.kind == ModelKind::Ols && prepared.plan.train_size <= prepared.frame.q() + 1) {
            throw ConfigError("model '" + model.name + "': training windows of " +
                              std::to_string(prepared.plan.train_size) +
                              " rows are too small for " + std::to_string(prepared.frame.q()) +
                              " predictors");
        }
    }
    return summary;
}

}  // namespace qcast
