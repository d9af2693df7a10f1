#include "qcast/tuning.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qcast/cv.hpp"
#include "qcast/errors.hpp"
#include "qcast/models.hpp"
#include "qcast/stats.hpp"

namespace qcast {

namespace {

double fold_score(double error, InnerMetric metric) {
    return metric == InnerMetric::Mae ? std::abs(error) : error * error;
}

}  // namespace

Vector lambda_grid(const Matrix& X, std::span<const double> y, std::size_t count, double ratio) {
    if (count < 2) {
        throw std::invalid_argument("lambda_grid: need at least two grid points");
    }
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("lambda_grid: ratio must lie in (0, 1)");
    }
    const std::size_t n = X.rows();
    const std::size_t q = X.cols();
    if (y.size() != n) {
        throw std::invalid_argument("lambda_grid: response length does not match design rows");
    }
    if (q == 0) {
        throw std::invalid_argument("lambda_grid: design has no predictors");
    }
    if (n < 2) {
        throw std::invalid_argument("lambda_grid: need at least two observations");
    }

    // Smallest lambda at which the LASSO zeroes every slope. At beta = 0 the
    // subgradient condition reads |2 x_j . (y - ybar)| <= lambda for all
    // standardized columns j.
    const double y_bar = mean(y);
    double max_cross = 0.0;
    for (std::size_t c = 0; c < q; ++c) {
        const Vector col = X.column(c);
        const double m = mean(col);
        const double sd = std::sqrt(variance(col));
        if (sd == 0.0) {
            throw NumericError("lambda_grid: predictor column " + std::to_string(c) +
                               " has zero variance");
        }
        double cross = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            cross += ((col[r] - m) / sd) * (y[r] - y_bar);
        }
        max_cross = std::max(max_cross, std::abs(cross));
    }
    const double lambda_max = 2.0 * max_cross;
    if (lambda_max == 0.0) {
        throw NumericError("lambda_grid: response is uncorrelated with every predictor");
    }

    Vector grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = lambda_max * std::pow(ratio, static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return grid;
}

LambdaPath select_lambda(const Matrix& X, std::span<const double> y, double alpha, LambdaRule rule,
                         const TuningConfig& config) {
    const std::size_t n = X.rows();
    const std::size_t q = X.cols();
    if (y.size() != n) {
        throw std::invalid_argument("select_lambda: response length does not match design rows");
    }

    LambdaPath path;
    path.rule = rule;
    path.grid = lambda_grid(X, y, config.grid_count, config.grid_ratio);
    const std::size_t g = path.grid.size();
    path.scores.assign(g, 0.0);
    path.std_errors.assign(g, 0.0);

    if (rule == LambdaRule::Aic) {
        const Vector y_vec(y.begin(), y.end());
        for (std::size_t i = 0; i < g; ++i) {
            const FittedModel model = fit_penalised(X, y, PenaltySpec{path.grid[i], alpha});
            double rss = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                const double e = y_vec[t] - model.fitted[t];
                rss += e * e;
            }
            std::size_t nonzero = 0;
            for (double b : model.coefficients) {
                if (b != 0.0) ++nonzero;
            }
            const std::size_t k_params = nonzero + 1;  // slopes + intercept
            path.scores[i] = static_cast<double>(n) * std::log(rss / static_cast<double>(n)) +
                             2.0 * static_cast<double>(k_params);
        }
        // Ties go to the first (largest) lambda.
        std::size_t best = 0;
        for (std::size_t i = 1; i < g; ++i) {
            if (path.scores[i] < path.scores[best]) best = i;
        }
        path.chosen_index = best;
        path.chosen = path.grid[best];
        return path;
    }

    if (config.inner_folds < 2) {
        throw ConfigError("select_lambda: inner_folds must be at least 2");
    }
    if (n < config.inner_folds + 3) {
        throw ConfigError("select_lambda: training window of " + std::to_string(n) +
                          " rows cannot host " + std::to_string(config.inner_folds) +
                          " inner folds");
    }
    const FoldPlan plan = make_fold_plan(n, config.inner_folds);
    if (plan.train_size < q + 2) {
        throw ConfigError("select_lambda: inner training windows of " +
                          std::to_string(plan.train_size) + " rows are too small for " +
                          std::to_string(q) + " predictors");
    }

    const std::size_t folds = plan.folds.size();
    std::vector<Vector> fold_scores(g, Vector(folds, 0.0));
    for (std::size_t f = 0; f < folds; ++f) {
        const Fold& fold = plan.folds[f];
        const Matrix x_train = X.row_window(fold.train_start, plan.train_size);
        const std::span<const double> y_train = y.subspan(fold.train_start, plan.train_size);
        const Matrix x_test = X.row_window(fold.test_index, 1);
        for (std::size_t i = 0; i < g; ++i) {
            const FittedModel model = fit_penalised(x_train, y_train, PenaltySpec{path.grid[i], alpha});
            const double prediction = predict(model, x_test)[0];
            fold_scores[i][f] = fold_score(y[fold.test_index] - prediction, config.metric);
        }
    }
    for (std::size_t i = 0; i < g; ++i) {
        path.scores[i] = mean(fold_scores[i]);
        path.std_errors[i] = std::sqrt(variance(fold_scores[i]) / static_cast<double>(folds));
    }

    // Minimum score; ties go to the first (largest) lambda.
    std::size_t best = 0;
    for (std::size_t i = 1; i < g; ++i) {
        if (path.scores[i] < path.scores[best]) best = i;
    }

    if (rule == LambdaRule::Cv1se) {
        const double threshold = path.scores[best] + path.std_errors[best];
        for (std::size_t i = 0; i <= best; ++i) {
            if (path.scores[i] <= threshold) {
                best = i;  // first qualifying index is the largest lambda
                break;
            }
        }
    }

    path.chosen_index = best;
    path.chosen = path.grid[best];
    return path;
}

LambdaRule lambda_rule_from_string(std::string_view name) {
    if (name == "cv_min") return LambdaRule::CvMin;
    if (name == "cv_1se") return LambdaRule::Cv1se;
    if (name == "aic") return LambdaRule::Aic;
    throw ConfigError("unknown lambda rule '" + std::string(name) +
                      "'; expected cv_min, cv_1se, or aic");
}

std::string to_string(LambdaRule rule) {
    switch (rule) {
        case LambdaRule::CvMin: return "cv_min";
        case LambdaRule::Cv1se: return "cv_1se";
        case LambdaRule::Aic: return "aic";
    }
    return "cv_min";
}

}  // namespace qcast
