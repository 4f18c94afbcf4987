#pragma once

// Semi-parametric tail-index estimation on standardized residuals: the Hill
// estimator at a given number of order statistics, and the small-sample
// correction of Huisman, Koedijk, Kool and Palm (2001), which regresses the
// Hill curve on m and keeps the intercept.

#include <cstddef>
#include <span>
#include <vector>

namespace condevt {

/// Positive exceedance magnitudes sorted descending, with the size of the
/// full sample they came from.
struct TailSample {
    std::vector<double> values;
    std::size_t n_total = 0;
};

enum class TailMethod { fixed_fraction, huisman };

struct TailEstimate {
    double gamma = 0.0;   // tail measure, 1/alpha
    double alpha = 0.0;   // tail index
    std::size_t m = 0;    // number of order statistics above the threshold
    double standard_error = 0.0;  // gamma / sqrt(m)
    TailMethod method = TailMethod::fixed_fraction;
};

struct HillPoint {
    std::size_t m = 0;
    double gamma = 0.0;
};

using HillCurve = std::vector<HillPoint>;

/// Negated residuals that are strictly positive (the loss tail).
[[nodiscard]] TailSample downside_tail(std::span<const double> z);
/// Strictly positive residuals.
[[nodiscard]] TailSample upside_tail(std::span<const double> z);

/// gamma(m) = (1/m) sum_{j<=m} ln(X_(j) / X_(m+1)), X_(1) the largest.
/// Requires 1 <= m <= values.size() - 1.
[[nodiscard]] TailEstimate hill(const TailSample& sample, std::size_t m);

/// Hill at m = floor(fraction * n_total), 0 < fraction < 0.5.
[[nodiscard]] TailEstimate hill_at_fraction(const TailSample& sample, double fraction);

/// gamma(m) for m = 1..kappa in one pass over the log order statistics.
[[nodiscard]] HillCurve hill_curve(const TailSample& sample, std::size_t kappa);

struct WlsLine {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Weighted least squares of gamma(m) on (1, m) with weight sqrt(m) per point.
[[nodiscard]] WlsLine hill_regression(const HillCurve& curve);

/// Default regression window: half of the exceedance sample.
[[nodiscard]] std::size_t default_kappa(const TailSample& sample);

/// Modified Hill estimate: gamma is the regression intercept, m the point of
/// the curve closest to it (ties go to the larger m). Requires kappa >= 10.
[[nodiscard]] TailEstimate modified_hill(const TailSample& sample, std::size_t kappa);
[[nodiscard]] inline TailEstimate modified_hill(const TailSample& sample) {
    return modified_hill(sample, default_kappa(sample));
}

/// gamma / sqrt(m).
[[nodiscard]] double hill_standard_error(double gamma, std::size_t m);

}  // namespace condevt
