#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "qcast/frame.hpp"
#include "qcast/period.hpp"

namespace qcast {

/// Structural break injected into a scenario at a known quarter.
enum class BreakKind {
    None,
    LevelShock,    ///< adds shock_size to the response and every predictor for 4 quarters
    LoadingFlip,   ///< permanently negates the loadings of the first ceil(q/2) predictors
};

/// Recipe for a synthetic quarterly dataset. Observations follow a latent
/// AR(1) factor with persistence 0.6 and unit innovation sd (started from
/// its stationary distribution):
///
///   y_t    = f_t + noise_sd * e_t
///   x_it   = loading_i(t) * f_t + idiosyncratic_sd * u_it
///
/// Draw order is fixed — factor path, then response noise, then predictor
/// noise row by row — so for a given seed the factor and response do not
/// depend on q. Noise sds of zero give the exact noiseless limit.
struct ScenarioSpec {
    std::size_t n = 95;  ///< observations, >= 1
    std::size_t q = 14;  ///< predictors

    Vector loadings;     ///< q entries (empty = all ones)
    double noise_sd = 0.5;
    double idiosyncratic_sd = 1.0;

    BreakKind break_kind = BreakKind::None;
    std::optional<std::size_t> break_at;  ///< 1-based first affected observation
    double shock_size = 0.0;              ///< LevelShock only

    std::uint64_t seed = 0;
    Period start{2000, 2};
    std::string response_name = "y";
};

/// Deterministic standard-normal stream: std::mt19937_64 (bit-exact across
/// platforms) feeding Box-Muller on 53-bit uniforms mapped into (0, 1].
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    /// Next standard normal deviate.
    double next();

private:
    double uniform();

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Generates the scenario as a model-ready frame (no outlier filtering is
/// applied; all flags are false). Predictors are named x1..xq. Invalid
/// recipes (loadings length, break position out of [1, n], negative sds)
/// raise ConfigError.
[[nodiscard]] SeriesFrame generate(const ScenarioSpec& spec);

[[nodiscard]] BreakKind break_kind_from_string(std::string_view name);
[[nodiscard]] std::string to_string(BreakKind kind);

}  // namespace qcast
