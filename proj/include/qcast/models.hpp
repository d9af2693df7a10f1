#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcast/matrix.hpp"

namespace qcast {

enum class ModelKind {
    Ols,
    Ridge,
    Lasso,
    ElasticNet,
    Pls,
    Ar1,
};

[[nodiscard]] std::string to_string(ModelKind kind);

/// Penalty for the regularised least-squares objective
///
///   sum_t (y_t - b0 - x_t.b)^2 + lambda * sum_i ((1-alpha)|b_i| + alpha b_i^2)
///
/// evaluated on standardized predictors, with the intercept left out of the
/// penalty. NOTE the mixing convention: alpha = 1 is ridge, alpha = 0 is the
/// LASSO — the reverse of glmnet's parameterisation.
struct PenaltySpec {
    double lambda = 0.0;  ///< >= 0
    double alpha = 1.0;   ///< in [0, 1]; 1 = ridge, 0 = LASSO
};

/// Column means/scales used to standardize the training design. Scales are
/// sample standard deviations.
struct Standardization {
    Vector means;
    Vector scales;
};

/// How a penalised fit's lambda was chosen (filled in by the tuner/harness).
struct TuningInfo {
    double lambda = 0.0;
    double alpha = 1.0;
    std::string rule;  ///< "cv_min", "cv_1se", "aic", "fixed", or empty
};

/// Per-direction payload of a PLS fit, sufficient to rebuild every factor:
/// direction e has loading vector loadings[e] and forward slope slopes[e],
/// with factors formed from predictors centered at predictor_means.
struct PlsDirections {
    std::vector<Vector> loadings;
    Vector slopes;
    Vector predictor_means;
    double response_mean = 0.0;
};

/// A fitted forecasting model. `coefficients` are always on the original
/// predictor scale so that predict() is uniformly intercept + X.coefficients;
/// for PLS they are the composite across directions, for AR(1) the single
/// lag coefficient.
struct FittedModel {
    ModelKind kind = ModelKind::Ols;
    double intercept = 0.0;
    Vector coefficients;

    std::optional<Standardization> standardization;  ///< penalised fits only
    std::optional<TuningInfo> tuning;                ///< penalised fits only
    std::optional<PlsDirections> directions;         ///< present iff kind == Pls

    Vector fitted;  ///< in-sample fitted values, training row order
};

/// Ordinary least squares with an (unpenalised) intercept. Requires
/// n > q + 1. Collinear predictors raise SingularityError naming the column.
[[nodiscard]] FittedModel fit_ols(const Matrix& X, std::span<const double> y);

/// Penalised regression described on PenaltySpec. Predictors are standardized
/// internally and coefficients returned on the original scale; the intercept
/// is never penalised. alpha = 1 solves the ridge normal equations directly;
/// anything else runs cyclic coordinate descent (see detail::elastic_net_cd).
/// lambda = 0 reduces to OLS. Constant predictor columns raise NumericError.
[[nodiscard]] FittedModel fit_penalised(const Matrix& X, std::span<const double> y,
                                        const PenaltySpec& penalty);

/// Partial least squares via iterated marginal regressions: starting from the
/// response, each direction d regresses the current residual on every
/// predictor marginally, bundles the per-predictor slopes into a loading
/// vector, forms the factor z_d = X.loading, and takes one least-squares step
/// of the residual on z_d. Each step is a full marginal regression (slope and
/// intercept), so the recursion is equivalent to running on mean-centered
/// predictors. Requires directions >= 1 and no constant predictor column
/// (NumericError naming the column otherwise). The count may exceed the
/// predictor count: extra steps keep shrinking the residual toward the
/// least-squares fit, and once the residual is orthogonal to every predictor
/// they get zero slope and contribute nothing.
[[nodiscard]] FittedModel fit_pls(const Matrix& X, std::span<const double> y,
                                  std::size_t directions);

/// First-order autoregression y_t = b0 + b1 y_{t-1} fitted by least squares.
/// Requires length >= 3. A constant series (or constant lag column) has an
/// undefined marginal slope and degenerates, by convention, to slope 0 with
/// the intercept at the mean of the regression targets.
[[nodiscard]] FittedModel fit_ar1(std::span<const double> y);

/// Applies a fitted model to new rows: intercept + X_new.coefficients.
/// X_new must have exactly coefficients.size() columns (for AR(1), one
/// column holding the lagged response).
[[nodiscard]] Vector predict(const FittedModel& model, const Matrix& X_new);

namespace detail {

struct CdOptions {
    double tolerance = 1e-8;        ///< max absolute coefficient change per sweep
    std::size_t max_sweeps = 10000;
};

struct CdResult {
    Vector beta;                ///< standardized-scale coefficients
    std::size_t sweeps = 0;
    double last_delta = 0.0;
    Vector objective_trace;     ///< objective value after each sweep
};

/// Cyclic coordinate descent for the penalised objective on an already
/// standardized design and centered response. Coefficients start at zero and
/// coordinates update in column order; iteration stops when no coefficient
/// moved more than `tolerance` in a sweep, and throws ConvergenceError once
/// `max_sweeps` is exhausted.
[[nodiscard]] CdResult elastic_net_cd(const Matrix& X_std, std::span<const double> y_centered,
                                      double lambda, double alpha, const CdOptions& options = {});

}  // namespace detail

}  // namespace qcast
