#pragma once

// AR(1)-GARCH(1,1) with unit-variance Student-t (or Gaussian) innovations:
//
//   R_t       = mu_t + sigma_t z_t
//   mu_t      = phi R_{t-1}
//   sigma_t^2 = alpha0 + alpha1 R_{t-1}^2 + beta1 sigma_{t-1}^2
//
// The recursion is seeded with mu_1 = 0 and sigma_1^2 equal to the sample
// variance, and the likelihood conditions on the first observation.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condevt/data_io.hpp"

namespace condevt {

enum class Innovation { student_t, normal };

/// How simulated Student-t draws are scaled.
enum class TConvention {
    standardized,  // t(nu) * sqrt((nu-2)/nu), unit variance
    raw            // classical t(nu), variance nu/(nu-2)
};

struct GarchParams {
    double phi = 0.0;
    double alpha0 = 0.1;  // percent^2
    double alpha1 = 0.15;
    double beta1 = 0.8;
    double nu = 4.0;  // ignored for Gaussian innovations
    Innovation innovation = Innovation::student_t;

    /// Throws std::invalid_argument unless alpha0 > 0, alpha1, beta1 >= 0,
    /// alpha1 + beta1 < 1 and (for Student-t) nu > 2.
    void validate() const;

    [[nodiscard]] double persistence() const noexcept { return alpha1 + beta1; }
    [[nodiscard]] double unconditional_variance() const noexcept { return alpha0 / (1.0 - persistence()); }
};

/// Number of estimated coefficients (nu is held fixed).
inline constexpr std::size_t kGarchDim = 4;
/// Coefficient order used by every per-parameter array: phi, alpha0, alpha1, beta1.
using GarchVector = std::array<double, kGarchDim>;

struct FilterOutput {
    std::vector<double> mu;
    std::vector<double> sigma;
    std::vector<double> z;
};

struct Forecast {
    double mu_next = 0.0;
    double sigma_next = 1.0;
};

struct OptimizerConfig {
    int max_iterations = 500;  // per starting point
    double tolerance = 1e-9;   // relative spread of the simplex objective
    bool compute_standard_errors = true;
};

struct FitResult {
    GarchParams params;
    double loglik = 0.0;
    std::optional<GarchVector> robust_se;  // empty when the Hessian is singular
    bool converged = false;
    int iterations = 0;
    bool boundary = false;  // alpha1 + beta1 pressed against the stationarity bound
    std::vector<std::string> warnings;
};

/// Conditional log-likelihood summed over t = 2..T.
/// Throws std::invalid_argument for invalid params or fewer than 10
/// observations; NumericalError when the value is not finite.
[[nodiscard]] double log_likelihood(const GarchParams& params, const ReturnSeries& series);

/// Per-observation log-likelihood terms for t = 2..T (size T-1). No
/// parameter validation: used for numerical derivatives around a point.
[[nodiscard]] std::vector<double> loglik_contributions(const GarchParams& params, std::span<const double> r);

/// Maximum-likelihood fit of (phi, alpha0, alpha1, beta1) at fixed nu and
/// innovation law taken from `model`. Deterministic: three fixed starting
/// points, best result kept.
[[nodiscard]] FitResult fit(const ReturnSeries& series, const GarchParams& model = {},
                            const OptimizerConfig& config = {});

/// The fixed starting points fit() searches from.
[[nodiscard]] std::vector<GarchParams> starting_points(const ReturnSeries& series, const GarchParams& model = {});

/// Which coefficients are free when differentiating; fixed ones report SE 0.
using ParameterMask = std::array<bool, kGarchDim>;
inline constexpr ParameterMask kAllFree{true, true, true, true};

/// Bollerslev-Wooldridge sandwich standard errors H^-1 S H^-1 / T from a
/// central-difference Hessian of the mean log-likelihood and the outer
/// product of per-observation scores. Throws std::domain_error when the
/// Hessian is singular.
[[nodiscard]] GarchVector robust_se(const GarchParams& params, const ReturnSeries& series,
                                    const ParameterMask& free = kAllFree);

/// Classical inverse-Hessian standard errors at the same point.
[[nodiscard]] GarchVector hessian_se(const GarchParams& params, const ReturnSeries& series,
                                     const ParameterMask& free = kAllFree);

[[nodiscard]] FilterOutput filter(const GarchParams& params, const ReturnSeries& series);

/// One-step-ahead conditional mean and volatility after the last observation.
[[nodiscard]] Forecast forecast(const GarchParams& params, const ReturnSeries& series, const FilterOutput& filtered);

/// Simulated path of length n after discarding burn_in draws.
[[nodiscard]] ReturnSeries simulate(const GarchParams& params, std::size_t n, std::size_t burn_in, std::uint64_t seed,
                                    TConvention convention = TConvention::standardized);

}  // namespace condevt
