#include "qcast/cv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "qcast/errors.hpp"
#include "qcast/stats.hpp"

namespace qcast {

namespace {

bool is_penalised(ModelKind kind) {
    return kind == ModelKind::Ridge || kind == ModelKind::Lasso || kind == ModelKind::ElasticNet;
}

double model_alpha(const ModelConfig& config) {
    switch (config.kind) {
        case ModelKind::Ridge: return 1.0;
        case ModelKind::Lasso: return 0.0;
        default: return config.alpha;
    }
}

void validate_configs(const SeriesFrame& frame, const std::vector<ModelConfig>& models,
                      std::size_t train_size) {
    if (models.empty()) {
        throw ConfigError("run_cv: no models configured");
    }
    std::set<std::string> seen;
    for (const auto& model : models) {
        if (model.name.empty()) {
            throw ConfigError("run_cv: model with empty name");
        }
        if (!seen.insert(model.name).second) {
            throw ConfigError("run_cv: duplicate model name '" + model.name + "'");
        }
        if (is_penalised(model.kind)) {
            if (frame.q() == 0) {
                throw ConfigError("model '" + model.name + "' needs predictor columns");
            }
            const double alpha = model_alpha(model);
            if (!(alpha >= 0.0 && alpha <= 1.0)) {
                throw ConfigError("model '" + model.name + "': alpha must lie in [0, 1]");
            }
            if (model.fixed_lambda && !(*model.fixed_lambda >= 0.0)) {
                throw ConfigError("model '" + model.name + "': lambda must be >= 0");
            }
        }
        if (model.kind == ModelKind::Pls) {
            if (model.pls_directions < 1 || model.pls_directions > frame.q()) {
                throw ConfigError("model '" + model.name + "': directions must lie in [1, " +
                                  std::to_string(frame.q()) + "]");
            }
        }
        if (model.kind == ModelKind::Ols && train_size <= frame.q() + 1) {
            throw ConfigError("model '" + model.name + "': training windows of " +
                              std::to_string(train_size) + " rows are too small for " +
                              std::to_string(frame.q()) + " predictors");
        }
    }
}

/// Fits one model on a training window and predicts the test row.
FoldOutcome evaluate_fold(const SeriesFrame& frame, const ModelConfig& config, const Fold& fold,
                          std::size_t train_size, const std::optional<double>& preset_lambda) {
    FoldOutcome outcome;
    outcome.actual = frame.response[fold.test_index];
    try {
        const Matrix x_train = frame.predictors.row_window(fold.train_start, train_size);
        const std::span<const double> y_train{frame.response.data() + fold.train_start, train_size};

        FittedModel model;
        Matrix x_test(1, 0);
        switch (config.kind) {
            case ModelKind::Ols:
                model = fit_ols(x_train, y_train);
                x_test = frame.predictors.row_window(fold.test_index, 1);
                break;
            case ModelKind::Ridge:
            case ModelKind::Lasso:
            case ModelKind::ElasticNet: {
                const double alpha = model_alpha(config);
                double lambda = 0.0;
                std::string rule = "fixed";
                if (config.fixed_lambda) {
                    lambda = *config.fixed_lambda;
                } else if (preset_lambda) {
                    lambda = *preset_lambda;
                    rule = to_string(config.rule);
                } else {
                    const LambdaPath path =
                        select_lambda(x_train, y_train, alpha, config.rule, config.tuning);
                    lambda = path.chosen;
                    rule = to_string(config.rule);
                }
                model = fit_penalised(x_train, y_train, PenaltySpec{lambda, alpha});
                model.tuning->rule = rule;
                outcome.lambda_used = lambda;
                x_test = frame.predictors.row_window(fold.test_index, 1);
                break;
            }
            case ModelKind::Pls:
                model = fit_pls(x_train, y_train, config.pls_directions);
                x_test = frame.predictors.row_window(fold.test_index, 1);
                break;
            case ModelKind::Ar1: {
                model = fit_ar1(y_train);
                x_test = Matrix(1, 1);
                x_test(0, 0) = frame.response[fold.train_end];
                break;
            }
        }
        outcome.prediction = predict(model, x_test)[0];
        outcome.valid = true;
    } catch (const std::exception& e) {
        outcome.valid = false;
        outcome.failure = e.what();
    }
    return outcome;
}

}  // namespace

FoldPlan make_fold_plan(std::size_t n, std::size_t k) {
    if (k < 2 || k + 3 > n) {
        throw std::invalid_argument("make_fold_plan: need 2 <= k <= n - 3 (got n=" +
                                    std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    FoldPlan plan;
    plan.train_size = n - k;
    plan.fold_count = k;
    plan.folds.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        Fold fold;
        fold.train_start = j;
        fold.train_end = j + plan.train_size - 1;
        fold.test_index = j + plan.train_size;
        plan.folds.push_back(fold);
    }
    return plan;
}

double mae(std::span<const double> errors) {
    if (errors.empty()) {
        throw std::invalid_argument("mae: empty input");
    }
    double sum = 0.0;
    for (double e : errors) {
        sum += std::abs(e);
    }
    return sum / static_cast<double>(errors.size());
}

double rmse(std::span<const double> errors) {
    if (errors.empty()) {
        throw std::invalid_argument("rmse: empty input");
    }
    double sum = 0.0;
    for (double e : errors) {
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(errors.size()));
}

Vector cumulative_abs_error(std::span<const double> errors) {
    Vector out(errors.size());
    double running = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        running += std::abs(errors[i]);
        out[i] = running;
    }
    return out;
}

CvReport run_cv(const SeriesFrame& frame, const std::vector<ModelConfig>& models,
                const FoldPlan& plan, unsigned threads) {
    if (frame.n() != plan.train_size + plan.fold_count) {
        throw std::invalid_argument("run_cv: fold plan does not match the frame length");
    }
    validate_configs(frame, models, plan.train_size);

    const std::size_t k = plan.fold_count;
    const std::size_t n_models = models.size();

    // Models tuned once reuse the lambda selected on the first training
    // window; resolve those up front so parallel folds stay independent.
    std::vector<std::optional<double>> preset_lambdas(n_models);
    for (std::size_t mi = 0; mi < n_models; ++mi) {
        const ModelConfig& config = models[mi];
        if (is_penalised(config.kind) && !config.fixed_lambda && !config.retune_each_fold) {
            const Fold& first = plan.folds.front();
            const Matrix x_train = frame.predictors.row_window(first.train_start, plan.train_size);
            const std::span<const double> y_train{frame.response.data() + first.train_start,
                                                  plan.train_size};
            preset_lambdas[mi] =
                select_lambda(x_train, y_train, model_alpha(config), config.rule, config.tuning)
                    .chosen;
        }
    }

    // Results land in preallocated slots indexed by (model, fold), so the
    // assembly below is identical for any worker count.
    std::vector<std::vector<FoldOutcome>> outcomes(n_models, std::vector<FoldOutcome>(k));
    const auto run_fold = [&](std::size_t j) {
        for (std::size_t mi = 0; mi < n_models; ++mi) {
            outcomes[mi][j] =
                evaluate_fold(frame, models[mi], plan.folds[j], plan.train_size, preset_lambdas[mi]);
        }
    };

    const unsigned workers = std::min<unsigned>(std::max(1u, threads), static_cast<unsigned>(k));
    if (workers <= 1) {
        for (std::size_t j = 0; j < k; ++j) {
            run_fold(j);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t j = next.fetch_add(1); j < k; j = next.fetch_add(1)) {
                    run_fold(j);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    CvReport report;
    report.n = frame.n();
    report.k = k;
    report.m = plan.train_size;
    report.test_periods.reserve(k);
    report.actuals.reserve(k);
    for (const Fold& fold : plan.folds) {
        report.test_periods.push_back(frame.periods[fold.test_index]);
        report.actuals.push_back(frame.response[fold.test_index]);
    }

    report.models.reserve(n_models);
    for (std::size_t mi = 0; mi < n_models; ++mi) {
        ModelReport mr;
        mr.name = models[mi].name;
        mr.kind = to_string(models[mi].kind);
        mr.folds = std::move(outcomes[mi]);
        if (mr.complete()) {
            Vector errors(k);
            for (std::size_t j = 0; j < k; ++j) {
                errors[j] = mr.folds[j].actual - mr.folds[j].prediction;
            }
            mr.mae = mae(errors);
            mr.rmse = rmse(errors);
            mr.cumulative_abs_errors = cumulative_abs_error(errors);
        }
        report.models.push_back(std::move(mr));
    }
    return report;
}

ModelReport median_ensemble(const CvReport& report, const std::string& name,
                            const std::vector<std::string>& members) {
    if (members.empty()) {
        throw ConfigError("median_ensemble: no members listed");
    }
    std::vector<const ModelReport*> sources;
    sources.reserve(members.size());
    for (const auto& member : members) {
        const ModelReport* found = nullptr;
        for (const auto& mr : report.models) {
            if (mr.name == member) {
                found = &mr;
                break;
            }
        }
        if (!found) {
            throw ConfigError("median_ensemble: unknown member '" + member + "'");
        }
        if (!found->complete()) {
            throw NumericError("median_ensemble: member '" + member +
                               "' has failed folds; refusing to aggregate");
        }
        sources.push_back(found);
    }

    const std::size_t k = report.k;
    ModelReport out;
    out.name = name;
    out.kind = "median_ensemble";
    out.folds.resize(k);
    Vector errors(k);
    Vector buffer(sources.size());
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t s = 0; s < sources.size(); ++s) {
            buffer[s] = sources[s]->folds[j].prediction;
        }
        FoldOutcome& fo = out.folds[j];
        fo.valid = true;
        fo.prediction = median(buffer);
        fo.actual = report.actuals[j];
        errors[j] = fo.actual - fo.prediction;
    }
    out.mae = mae(errors);
    out.rmse = rmse(errors);
    out.cumulative_abs_errors = cumulative_abs_error(errors);
    return out;
}

}  // namespace qcast
