#pragma once

// Tail probability and quantile estimators on standardized residuals,
// conditionalised with the one-step GARCH forecast and scaled to h periods
// by the alpha-root law q = h^(1/alpha):
//
//   P(Z > z) ~ (Z_{m,T} / z)^(1/gamma) * m / T
//   Q(p)     ~ Z_{m,T} * (m / (T p))^gamma
//
// Lower-tail results are loss magnitudes (positive numbers for losses).
// The Gaussian benchmark applies sqrt(h) scaling to a normal conditional law.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "condevt/garch.hpp"
#include "condevt/tail.hpp"

namespace condevt {

enum class TailSide { lower, upper };
enum class RiskKind { probability, quantile };
enum class RiskMethod { evt, gaussian };

/// What to do inside the empirical range (p > m/T, or z below the
/// threshold order statistic). `empirical_inside` re-anchors the quantile
/// estimator at the order statistic of rank floor(p T) and answers
/// probabilities with the empirical exceedance frequency.
enum class Extrapolation { tail_only, empirical_inside };

class TailRiskModel {
public:
    /// Throws std::invalid_argument unless z_threshold > 0 and
    /// 0 < m/n_total < 0.5.
    TailRiskModel(TailEstimate tail, double z_threshold, std::size_t n_total, TailSide side = TailSide::lower);

    /// Threshold Z_{m,T} is the (m+1)-th largest value of the sample. The
    /// sorted exceedances are kept for evaluation inside the sample range.
    [[nodiscard]] static TailRiskModel from_sample(const TailSample& sample, const TailEstimate& tail,
                                                   TailSide side = TailSide::lower);

    [[nodiscard]] const TailEstimate& tail() const noexcept { return tail_; }
    [[nodiscard]] double z_threshold() const noexcept { return z_threshold_; }
    [[nodiscard]] std::size_t n_total() const noexcept { return n_total_; }
    [[nodiscard]] TailSide side() const noexcept { return side_; }
    /// m / T, the empirical probability beyond the threshold.
    [[nodiscard]] double tail_fraction() const noexcept;
    /// Descending exceedances; empty for models built from summary numbers.
    [[nodiscard]] std::span<const double> sample() const noexcept { return *sample_; }

private:
    std::shared_ptr<const std::vector<double>> sample_;
    TailEstimate tail_;
    double z_threshold_;
    std::size_t n_total_;
    TailSide side_;
};

struct ScalingFactor {
    std::size_t h = 1;
    double alpha = 0.0;
    double q = 1.0;
};

struct RiskEstimate {
    double value = 0.0;
    RiskKind kind = RiskKind::quantile;
    std::size_t horizon = 1;
    RiskMethod method = RiskMethod::evt;
    TailSide tail_side = TailSide::lower;
    Forecast forecast;
    double scaling = 1.0;  // h^(1/alpha) or sqrt(h)
    bool capped = false;   // probability clipped to 1 after scaling
};

/// (Z_{m,T}/z_p)^(1/gamma) * m/T. Throws OutsideTailRegion for z_p below
/// the threshold unless empirical evaluation inside the sample is allowed.
[[nodiscard]] double tail_probability_std(const TailRiskModel& model, double z_p,
                                          Extrapolation region = Extrapolation::tail_only);

/// Z_{m,T} * (m/(T p))^gamma. Throws OutsideTailRegion for p > m/T unless
/// empirical evaluation inside the sample is allowed; std::invalid_argument
/// unless 0 < p < 1.
[[nodiscard]] double tail_quantile_std(const TailRiskModel& model, double p,
                                       Extrapolation region = Extrapolation::tail_only);

/// q = h^(1/alpha). Throws ScalingInapplicable when alpha <= 2.
[[nodiscard]] ScalingFactor scaling_factor(std::size_t h, double alpha);

/// Quantile at tail probability p (p = 0.01 for Q99) over h periods.
[[nodiscard]] RiskEstimate conditional_quantile(const Forecast& forecast, const TailRiskModel& model, double p,
                                                std::size_t h, Extrapolation region = Extrapolation::tail_only);

/// Probability that the return moves beyond x_threshold (a loss magnitude
/// for the lower tail) over h periods.
[[nodiscard]] RiskEstimate conditional_probability(const Forecast& forecast, const TailRiskModel& model,
                                                   double x_threshold, std::size_t h,
                                                   Extrapolation region = Extrapolation::tail_only);

[[nodiscard]] RiskEstimate gaussian_quantile(const Forecast& forecast, double p, std::size_t h,
                                             TailSide side = TailSide::lower);

[[nodiscard]] RiskEstimate gaussian_probability(const Forecast& forecast, double x_threshold, std::size_t h,
                                                TailSide side = TailSide::lower);

}  // namespace condevt
