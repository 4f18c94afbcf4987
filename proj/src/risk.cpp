#include "condevt/risk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "condevt/errors.hpp"
#include "condevt/normal.hpp"

namespace condevt {

namespace {

void check_horizon(std::size_t h) {
    if (h < 1) throw std::invalid_argument("horizon must be at least 1");
}

void check_forecast(const Forecast& f) {
    if (!(f.sigma_next > 0.0) || !std::isfinite(f.mu_next)) {
        throw std::invalid_argument("forecast needs finite mu and positive sigma");
    }
}

}  // namespace

TailRiskModel::TailRiskModel(TailEstimate tail, double z_threshold, std::size_t n_total, TailSide side)
    : sample_(std::make_shared<const std::vector<double>>()),
      tail_(tail),
      z_threshold_(z_threshold),
      n_total_(n_total),
      side_(side) {
    if (!(z_threshold_ > 0.0)) throw std::invalid_argument("tail threshold must be positive");
    if (!(tail_.gamma > 0.0)) throw std::invalid_argument("tail measure gamma must be positive");
    if (n_total_ == 0 || tail_.m == 0 || 2 * tail_.m >= n_total_) {
        throw std::invalid_argument("tail fraction m/T must lie in (0, 0.5)");
    }
}

TailRiskModel TailRiskModel::from_sample(const TailSample& sample, const TailEstimate& tail, TailSide side) {
    if (tail.m >= sample.values.size()) throw std::invalid_argument("tail estimate m exceeds the sample");
    TailRiskModel model(tail, sample.values[tail.m], sample.n_total, side);
    model.sample_ = std::make_shared<const std::vector<double>>(sample.values);
    return model;
}

double TailRiskModel::tail_fraction() const noexcept {
    return static_cast<double>(tail_.m) / static_cast<double>(n_total_);
}

double tail_probability_std(const TailRiskModel& model, double z_p, Extrapolation region) {
    if (!(z_p > 0.0)) throw OutsideTailRegion("tail probability needs a positive standardized threshold");
    if (z_p < model.z_threshold()) {
        const auto sample = model.sample();
        if (region == Extrapolation::tail_only || sample.empty()) {
            throw OutsideTailRegion("inside-sample probability requested; use empirical frequency");
        }
        const auto above = std::upper_bound(sample.begin(), sample.end(), z_p, std::greater<>()) - sample.begin();
        return static_cast<double>(above) / static_cast<double>(model.n_total());
    }
    return std::pow(model.z_threshold() / z_p, 1.0 / model.tail().gamma) * model.tail_fraction();
}

double tail_quantile_std(const TailRiskModel& model, double p, Extrapolation region) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("tail quantile needs 0 < p < 1");
    if (p > model.tail_fraction()) {
        const auto sample = model.sample();
        const auto rank = static_cast<std::size_t>(std::floor(p * static_cast<double>(model.n_total())));
        if (region == Extrapolation::tail_only || rank >= sample.size()) {
            throw OutsideTailRegion("quantile inside empirical range (p = " + std::to_string(p) +
                                    " > m/T = " + std::to_string(model.tail_fraction()) + ")");
        }
        const double anchored_fraction = static_cast<double>(rank) / static_cast<double>(model.n_total());
        return sample[rank] * std::pow(anchored_fraction / p, model.tail().gamma);
    }
    return model.z_threshold() * std::pow(model.tail_fraction() / p, model.tail().gamma);
}

ScalingFactor scaling_factor(std::size_t h, double alpha) {
    check_horizon(h);
    if (!(alpha > 2.0)) {
        throw ScalingInapplicable("infinite-variance tail; scaling law inapplicable (alpha = " +
                                  std::to_string(alpha) + ")");
    }
    return {h, alpha, h == 1 ? 1.0 : std::pow(static_cast<double>(h), 1.0 / alpha)};
}

RiskEstimate conditional_quantile(const Forecast& forecast, const TailRiskModel& model, double p, std::size_t h,
                                  Extrapolation region) {
    check_horizon(h);
    check_forecast(forecast);
    // h = 1 needs no finite-variance gate
    const double q = h == 1 ? 1.0 : scaling_factor(h, model.tail().alpha).q;
    const double zq = q * tail_quantile_std(model, p, region);

    RiskEstimate est;
    est.kind = RiskKind::quantile;
    est.horizon = h;
    est.method = RiskMethod::evt;
    est.tail_side = model.side();
    est.forecast = forecast;
    est.scaling = q;
    est.value = model.side() == TailSide::lower ? forecast.sigma_next * zq - forecast.mu_next
                                                : forecast.mu_next + forecast.sigma_next * zq;
    return est;
}

RiskEstimate conditional_probability(const Forecast& forecast, const TailRiskModel& model, double x_threshold,
                                     std::size_t h, Extrapolation region) {
    check_horizon(h);
    check_forecast(forecast);
    const double q = h == 1 ? 1.0 : scaling_factor(h, model.tail().alpha).q;
    const double z = model.side() == TailSide::lower ? (x_threshold + forecast.mu_next) / forecast.sigma_next
                                                     : (x_threshold - forecast.mu_next) / forecast.sigma_next;
    const double p = q * tail_probability_std(model, z, region);

    RiskEstimate est;
    est.kind = RiskKind::probability;
    est.horizon = h;
    est.method = RiskMethod::evt;
    est.tail_side = model.side();
    est.forecast = forecast;
    est.scaling = q;
    est.capped = p > 1.0;
    est.value = std::min(p, 1.0);
    return est;
}

RiskEstimate gaussian_quantile(const Forecast& forecast, double p, std::size_t h, TailSide side) {
    check_horizon(h);
    check_forecast(forecast);
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gaussian_quantile needs 0 < p < 1");
    const double root_h = std::sqrt(static_cast<double>(h));
    RiskEstimate est;
    est.kind = RiskKind::quantile;
    est.horizon = h;
    est.method = RiskMethod::gaussian;
    est.tail_side = side;
    est.forecast = forecast;
    est.scaling = root_h;
    // upper tail at probability p is the (1-p) quantile; the lower-tail loss is its mirror
    const double z = normal_quantile(1.0 - p);
    est.value = side == TailSide::lower ? forecast.sigma_next * root_h * z - forecast.mu_next
                                        : forecast.mu_next + forecast.sigma_next * root_h * z;
    return est;
}

RiskEstimate gaussian_probability(const Forecast& forecast, double x_threshold, std::size_t h, TailSide side) {
    check_horizon(h);
    check_forecast(forecast);
    const double root_h = std::sqrt(static_cast<double>(h));
    const double scale = forecast.sigma_next * root_h;
    RiskEstimate est;
    est.kind = RiskKind::probability;
    est.horizon = h;
    est.method = RiskMethod::gaussian;
    est.tail_side = side;
    est.forecast = forecast;
    est.scaling = root_h;
    est.value = side == TailSide::lower ? normal_cdf((-x_threshold - forecast.mu_next) / scale)
                                        : normal_sf((x_threshold - forecast.mu_next) / scale);
    return est;
}

}  // namespace condevt
