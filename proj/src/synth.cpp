#include "qcast/synth.hpp"

#include <cmath>
#include <numbers>

#include "qcast/errors.hpp"

namespace qcast {

namespace {

constexpr double kFactorPersistence = 0.6;
constexpr double kFactorInnovationSd = 1.0;
constexpr std::size_t kShockQuarters = 4;

void validate(const ScenarioSpec& spec) {
    if (spec.n < 1) {
        throw ConfigError("scenario: n must be >= 1");
    }
    if (!spec.loadings.empty() && spec.loadings.size() != spec.q) {
        throw ConfigError("scenario: expected " + std::to_string(spec.q) + " loadings, got " +
                          std::to_string(spec.loadings.size()));
    }
    if (!(spec.noise_sd >= 0.0)) {
        throw ConfigError("scenario: noise_sd must be >= 0");
    }
    if (!(spec.idiosyncratic_sd >= 0.0)) {
        throw ConfigError("scenario: idiosyncratic_sd must be >= 0");
    }
    if (spec.break_kind != BreakKind::None && !spec.break_at) {
        throw ConfigError("scenario: break_kind set without break_at");
    }
    if (spec.break_at) {
        if (*spec.break_at < 1 || *spec.break_at > spec.n) {
            throw ConfigError("scenario: break_at must lie in [1, n]");
        }
        if (spec.break_kind == BreakKind::None) {
            throw ConfigError("scenario: break_at set without break_kind");
        }
    }
    if (!std::isfinite(spec.shock_size)) {
        throw ConfigError("scenario: shock_size must be finite");
    }
}

}  // namespace

double GaussianSampler::uniform() {
    // Top 53 bits, shifted into (0, 1] so the log below stays finite.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

SeriesFrame generate(const ScenarioSpec& spec) {
    validate(spec);

    const std::size_t n = spec.n;
    const std::size_t q = spec.q;
    Vector loadings = spec.loadings.empty() ? Vector(q, 1.0) : spec.loadings;

    GaussianSampler sampler(spec.seed);

    // Latent factor, started from the stationary distribution.
    Vector factor(n);
    const double stationary_sd =
        kFactorInnovationSd / std::sqrt(1.0 - kFactorPersistence * kFactorPersistence);
    factor[0] = stationary_sd * sampler.next();
    for (std::size_t t = 1; t < n; ++t) {
        factor[t] = kFactorPersistence * factor[t - 1] + kFactorInnovationSd * sampler.next();
    }

    Vector response(n);
    for (std::size_t t = 0; t < n; ++t) {
        response[t] = factor[t] + spec.noise_sd * sampler.next();
    }

    // 0-based index of the first affected observation.
    const std::size_t break_index = spec.break_at ? *spec.break_at - 1 : n;
    const std::size_t flip_count = (q + 1) / 2;

    Matrix predictors(n, q);
    for (std::size_t t = 0; t < n; ++t) {
        const bool flipped = spec.break_kind == BreakKind::LoadingFlip && t >= break_index;
        for (std::size_t i = 0; i < q; ++i) {
            const double loading = (flipped && i < flip_count) ? -loadings[i] : loadings[i];
            predictors(t, i) = loading * factor[t] + spec.idiosyncratic_sd * sampler.next();
        }
    }

    if (spec.break_kind == BreakKind::LevelShock) {
        const std::size_t end = std::min(n, break_index + kShockQuarters);
        for (std::size_t t = break_index; t < end; ++t) {
            response[t] += spec.shock_size;
            for (std::size_t i = 0; i < q; ++i) {
                predictors(t, i) += spec.shock_size;
            }
        }
    }

    SeriesFrame frame;
    frame.periods.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        frame.periods.push_back(spec.start.advanced(static_cast<int>(t)));
    }
    frame.response_name = spec.response_name;
    frame.response = std::move(response);
    frame.predictor_names.reserve(q);
    for (std::size_t i = 0; i < q; ++i) {
        frame.predictor_names.push_back("x" + std::to_string(i + 1));
    }
    frame.predictors = std::move(predictors);
    frame.response_outliers.assign(n, 0);
    frame.predictor_outliers.assign(q, std::vector<std::uint8_t>(n, 0));
    return frame;
}

BreakKind break_kind_from_string(std::string_view name) {
    if (name == "none") return BreakKind::None;
    if (name == "level_shock") return BreakKind::LevelShock;
    if (name == "loading_flip") return BreakKind::LoadingFlip;
    throw ConfigError("unknown break kind '" + std::string(name) +
                      "'; expected none, level_shock, or loading_flip");
}

std::string to_string(BreakKind kind) {
    switch (kind) {
        case BreakKind::None: return "none";
        case BreakKind::LevelShock: return "level_shock";
        case BreakKind::LoadingFlip: return "loading_flip";
    }
    return "none";
}

}  // namespace qcast
