#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "qcast/matrix.hpp"

namespace qcast {

/// How the penalty weight is picked from the grid.
enum class LambdaRule {
    CvMin,  ///< smallest mean out-of-sample error; ties go to the larger lambda
    Cv1se,  ///< largest lambda within one standard error of the minimum
    Aic,    ///< n*ln(RSS/n) + 2k with k = nonzero coefficients + intercept
};

/// Error metric aggregated over the inner validation folds.
enum class InnerMetric {
    Mae,
    Rmse,
};

struct TuningConfig {
    std::size_t grid_count = 50;   ///< >= 2 grid points
    double grid_ratio = 1e-3;      ///< smallest / largest lambda, in (0, 1)
    std::size_t inner_folds = 8;   ///< rolling-origin folds inside the training window
    InnerMetric metric = InnerMetric::Mae;
};

/// Grid search record: the candidate grid (strictly decreasing), the score
/// per candidate (mean per-fold error for the CV rules, the criterion value
/// for AIC), the per-candidate standard errors (zero for AIC), and the pick.
struct LambdaPath {
    Vector grid;
    Vector scores;
    Vector std_errors;
    double chosen = 0.0;
    std::size_t chosen_index = 0;
    LambdaRule rule = LambdaRule::CvMin;
};

/// Log-spaced decreasing grid headed by the smallest lambda at which the
/// LASSO zeroes every slope: twice the largest absolute inner product of a
/// standardized predictor with the centered response. Degenerate inputs
/// (a response uncorrelated with every predictor, or a constant predictor)
/// raise NumericError.
[[nodiscard]] Vector lambda_grid(const Matrix& X, std::span<const double> y, std::size_t count,
                                 double ratio);

/// Picks lambda for a penalised fit with the given mixing alpha. The CV rules
/// score each grid point with a rolling-origin split of the training window
/// (never touching observations after each inner test point); AIC refits on
/// the whole window. Fold counts that leave too small an inner training
/// window raise ConfigError.
[[nodiscard]] LambdaPath select_lambda(const Matrix& X, std::span<const double> y, double alpha,
                                       LambdaRule rule, const TuningConfig& config = {});

[[nodiscard]] LambdaRule lambda_rule_from_string(std::string_view name);
[[nodiscard]] std::string to_string(LambdaRule rule);

}  // namespace qcast
