#include "qcast/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qcast/errors.hpp"
#include "qcast/stats.hpp"

namespace qcast {

namespace {

struct StandardizedDesign {
    Matrix x;        // standardized columns
    Vector means;
    Vector scales;   // sample standard deviations
};

// Reject exactly-constant columns (max == min): their marginal slope and
// standardization are undefined. Numerically tiny but genuine variation is
// allowed.
void reject_constant_columns(const Matrix& X, const char* who) {
    for (std::size_t c = 0; c < X.cols(); ++c) {
        double lo = X(0, c);
        double hi = X(0, c);
        for (std::size_t r = 1; r < X.rows(); ++r) {
            lo = std::min(lo, X(r, c));
            hi = std::max(hi, X(r, c));
        }
        if (lo == hi) {
            throw NumericError(std::string(who) + ": predictor column " + std::to_string(c) +
                               " has zero variance");
        }
    }
}

StandardizedDesign standardize(const Matrix& X) {
    const std::size_t n = X.rows();
    const std::size_t q = X.cols();
    StandardizedDesign out;
    out.x = Matrix(n, q);
    out.means.resize(q);
    out.scales.resize(q);
    for (std::size_t c = 0; c < q; ++c) {
        const Vector col = X.column(c);
        const double m = mean(col);
        const double sd = std::sqrt(variance(col));
        out.means[c] = m;
        out.scales[c] = sd;
        for (std::size_t r = 0; r < n; ++r) {
            out.x(r, c) = (X(r, c) - m) / sd;
        }
    }
    return out;
}

Vector centered(std::span<const double> y, double m) {
    Vector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] - m;
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

Vector ridge_normal_equations(const Matrix& X_std, const Vector& y_centered, double lambda) {
    using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajorMatrix> design(X_std.data().data(),
                                            static_cast<Eigen::Index>(X_std.rows()),
                                            static_cast<Eigen::Index>(X_std.cols()));
    Eigen::Map<const Eigen::VectorXd> rhs(y_centered.data(),
                                          static_cast<Eigen::Index>(y_centered.size()));
    Eigen::MatrixXd gram = design.transpose() * design;
    gram.diagonal().array() += lambda;
    const Eigen::VectorXd beta = gram.ldlt().solve(design.transpose() * rhs);
    return Vector(beta.data(), beta.data() + beta.size());
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Ols: return "ols";
        case ModelKind::Ridge: return "ridge";
        case ModelKind::Lasso: return "lasso";
        case ModelKind::ElasticNet: return "elastic_net";
        case ModelKind::Pls: return "pls";
        case ModelKind::Ar1: return "ar1";
    }
    return "unknown";
}

FittedModel fit_ols(const Matrix& X, std::span<const double> y) {
    const std::size_t n = X.rows();
    const std::size_t q = X.cols();
    if (y.size() != n) {
        throw std::invalid_argument("fit_ols: response length does not match design rows");
    }
    if (n <= q + 1) {
        throw std::invalid_argument("fit_ols: need more observations than coefficients");
    }

    const double y_bar = mean(y);
    FittedModel model;
    model.kind = ModelKind::Ols;

    if (q == 0) {
        model.intercept = y_bar;
    } else {
        // Center columns and response; the slope system then excludes the
        // intercept, and singular-column indices map one-to-one to predictors.
        Matrix x_centered(n, q);
        Vector col_means(q);
        for (std::size_t c = 0; c < q; ++c) {
            const Vector col = X.column(c);
            col_means[c] = mean(col);
            for (std::size_t r = 0; r < n; ++r) {
                x_centered(r, c) = X(r, c) - col_means[c];
            }
        }
        const Vector y_centered = centered(y, y_bar);
        model.coefficients = least_squares(x_centered, y_centered);
        double shift = 0.0;
        for (std::size_t c = 0; c < q; ++c) {
            shift += col_means[c] * model.coefficients[c];
        }
        model.intercept = y_bar - shift;
    }

    model.fitted = predict(model, X);
    return model;
}

FittedModel fit_penalised(const Matrix& X, std::span<const double> y, const PenaltySpec& penalty) {
    const std::size_t n = X.rows();
    const std::size_t q = X.cols();
    if (y.size() != n) {
        throw std::invalid_argument("fit_penalised: response length does not match design rows");
    }
    if (q == 0) {
        throw std::invalid_argument("fit_penalised: design has no predictors");
    }
    if (n < 2) {
        throw std::invalid_argument("fit_penalised: need at least two observations");
    }
    if (!(penalty.lambda >= 0.0)) {
        throw std::invalid_argument("fit_penalised: lambda must be >= 0");
    }
    if (!(penalty.alpha >= 0.0 && penalty.alpha <= 1.0)) {
        throw std::invalid_argument("fit_penalised: alpha must lie in [0, 1]");
    }
    reject_constant_columns(X, "fit_penalised");

    StandardizedDesign std_design = standardize(X);
    const double y_bar = mean(y);
    const Vector y_centered = centered(y, y_bar);

    Vector beta_std;
    if (penalty.lambda == 0.0) {
        // Penalty vanishes; solve the least-squares problem directly.
        beta_std = least_squares(std_design.x, y_centered);
    } else if (penalty.alpha == 1.0) {
        beta_std = ridge_normal_equations(std_design.x, y_centered, penalty.lambda);
    } else {
        beta_std = detail::elastic_net_cd(std_design.x, y_centered, penalty.lambda, penalty.alpha).beta;
    }

    FittedModel model;
    model.kind = penalty.alpha == 1.0 ? ModelKind::Ridge
               : penalty.alpha == 0.0 ? ModelKind::Lasso
                                      : ModelKind::ElasticNet;
    model.coefficients.resize(q);
    double shift = 0.0;
    for (std::size_t c = 0; c < q; ++c) {
        model.coefficients[c] = beta_std[c] / std_design.scales[c];
        shift += beta_std[c] * std_design.means[c] / std_design.scales[c];
    }
    model.intercept = y_bar - shift;
    model.standardization = Standardization{std::move(std_design.means), std::move(std_design.scales)};
    model.tuning = TuningInfo{penalty.lambda, penalty.alpha, ""};
    model.fitted = predict(model, X);
    return model;
}

FittedModel fit_pls(const Matrix& X, std::span<const double> y, std::size_t directions) {
    const std::size_t n = X.rows();
    const std::size_t q = X.cols();
    if (y.size() != n) {
        throw std::invalid_argument("fit_pls: response length does not match design rows");
    }
    if (q == 0) {
        throw std::invalid_argument("fit_pls: design has no predictors");
    }
    if (directions < 1) {
        throw std::invalid_argument("fit_pls: directions must be at least 1");
    }
    if (n < 2) {
        throw std::invalid_argument("fit_pls: need at least two observations");
    }
    reject_constant_columns(X, "fit_pls");

    // Work on centered data; each boosting step below is then exactly a
    // marginal regression with its intercept folded away.
    Vector x_means(q);
    Matrix x_centered(n, q);
    for (std::size_t c = 0; c < q; ++c) {
        const Vector col = X.column(c);
        x_means[c] = mean(col);
        for (std::size_t r = 0; r < n; ++r) {
            x_centered(r, c) = X(r, c) - x_means[c];
        }
    }
    Vector col_sumsq(q, 0.0);
    for (std::size_t c = 0; c < q; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            col_sumsq[c] += x_centered(r, c) * x_centered(r, c);
        }
    }

    const double y_bar = mean(y);
    Vector residual = centered(y, y_bar);

    PlsDirections payload;
    payload.predictor_means = x_means;
    payload.response_mean = y_bar;

    Vector composite(q, 0.0);
    for (std::size_t d = 0; d < directions; ++d) {
        // Marginal slopes of the current residual on each predictor.
        Vector loading(q);
        for (std::size_t c = 0; c < q; ++c) {
            double cross = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                cross += x_centered(r, c) * residual[r];
            }
            loading[c] = cross / col_sumsq[c];
        }
        // Bundle into a single factor and take one least-squares step on it.
        Vector factor(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < q; ++c) {
                s += x_centered(r, c) * loading[c];
            }
            factor[r] = s;
        }
        const double factor_sumsq = dot(factor, factor);
        // Once the residual is orthogonal to every predictor the factor
        // collapses to zero; further directions contribute nothing.
        const double slope = factor_sumsq > 0.0 ? dot(factor, residual) / factor_sumsq : 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            residual[r] -= slope * factor[r];
        }
        for (std::size_t c = 0; c < q; ++c) {
            composite[c] += slope * loading[c];
        }
        payload.loadings.push_back(std::move(loading));
        payload.slopes.push_back(slope);
    }

    FittedModel model;
    model.kind = ModelKind::Pls;
    model.coefficients = std::move(composite);
    double shift = 0.0;
    for (std::size_t c = 0; c < q; ++c) {
        shift += x_means[c] * model.coefficients[c];
    }
    model.intercept = y_bar - shift;
    model.directions = std::move(payload);
    model.fitted = predict(model, X);
    return model;
}

FittedModel fit_ar1(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 3) {
        throw std::invalid_argument("fit_ar1: need at least three observations");
    }
    const std::span<const double> lag = y.subspan(0, n - 1);
    const std::span<const double> target = y.subspan(1, n - 1);

    FittedModel model;
    model.kind = ModelKind::Ar1;

    const auto [lo, hi] = std::minmax_element(lag.begin(), lag.end());
    if (*lo == *hi) {
        // Constant lag column: marginal slope undefined; degenerate to a
        // flat forecast at the targets' mean.
        model.coefficients = {0.0};
        model.intercept = mean(target);
    } else {
        const double slope = covariance(lag, target) / variance(lag);
        model.coefficients = {slope};
        model.intercept = mean(target) - slope * mean(lag);
    }

    Matrix lag_design(n - 1, 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lag_design(i, 0) = y[i];
    }
    model.fitted = predict(model, lag_design);
    return model;
}

Vector predict(const FittedModel& model, const Matrix& X_new) {
    if (X_new.cols() != model.coefficients.size()) {
        throw std::invalid_argument("predict: design has " + std::to_string(X_new.cols()) +
                                    " columns but the model expects " +
                                    std::to_string(model.coefficients.size()));
    }
    Vector out(X_new.rows());
    for (std::size_t r = 0; r < X_new.rows(); ++r) {
        double s = model.intercept;
        for (std::size_t c = 0; c < X_new.cols(); ++c) {
            s += X_new(r, c) * model.coefficients[c];
        }
        out[r] = s;
    }
    return out;
}

namespace detail {

CdResult elastic_net_cd(const Matrix& X_std, std::span<const double> y_centered, double lambda,
                        double alpha, const CdOptions& options) {
    const std::size_t n = X_std.rows();
    const std::size_t q = X_std.cols();
    if (y_centered.size() != n) {
        throw std::invalid_argument("elastic_net_cd: response length does not match design rows");
    }
    if (!(options.tolerance > 0.0)) {
        throw std::invalid_argument("elastic_net_cd: tolerance must be positive");
    }

    // Column-major copy so coordinate updates walk contiguous memory.
    std::vector<Vector> columns(q);
    Vector col_sumsq(q);
    for (std::size_t c = 0; c < q; ++c) {
        columns[c] = X_std.column(c);
        col_sumsq[c] = dot(columns[c], columns[c]);
    }

    const double l1_gamma = lambda * (1.0 - alpha) / 2.0;
    const double l2_term = lambda * alpha;

    CdResult result;
    result.beta.assign(q, 0.0);
    Vector residual(y_centered.begin(), y_centered.end());

    for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t c = 0; c < q; ++c) {
            const double rho = dot(columns[c], residual) + col_sumsq[c] * result.beta[c];
            const double updated = soft_threshold(rho, l1_gamma) / (col_sumsq[c] + l2_term);
            const double change = updated - result.beta[c];
            if (change != 0.0) {
                for (std::size_t r = 0; r < n; ++r) {
                    residual[r] -= change * columns[c][r];
                }
                result.beta[c] = updated;
            }
            max_change = std::max(max_change, std::abs(change));
        }

        double objective = dot(residual, residual);
        for (std::size_t c = 0; c < q; ++c) {
            objective += lambda * ((1.0 - alpha) * std::abs(result.beta[c]) +
                                   alpha * result.beta[c] * result.beta[c]);
        }
        result.objective_trace.push_back(objective);
        result.sweeps = sweep;
        result.last_delta = max_change;
        if (max_change < options.tolerance) {
            return result;
        }
    }
    throw ConvergenceError("elastic_net_cd: no convergence after " +
                               std::to_string(options.max_sweeps) + " sweeps",
                           result.last_delta);
}

}  // namespace detail

}  // namespace qcast
