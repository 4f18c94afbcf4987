#include "condevt/tail.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "condevt/errors.hpp"

namespace condevt {

namespace {

TailSample make_tail(std::span<const double> z, double sign) {
    if (z.empty()) throw std::invalid_argument("tail sample: empty residual sequence");
    TailSample s;
    s.n_total = z.size();
    for (double v : z) {
        const double x = sign * v;
        if (x > 0.0) s.values.push_back(x);
    }
    if (s.values.empty()) throw DegenerateSample("tail sample: no positive exceedances");
    std::sort(s.values.begin(), s.values.end(), std::greater<>());
    return s;
}

TailEstimate make_estimate(double gamma, std::size_t m, TailMethod method) {
    TailEstimate e;
    e.gamma = gamma;
    e.alpha = 1.0 / gamma;
    e.m = m;
    e.standard_error = hill_standard_error(gamma, m);
    e.method = method;
    return e;
}

}  // namespace

TailSample downside_tail(std::span<const double> z) { return make_tail(z, -1.0); }

TailSample upside_tail(std::span<const double> z) { return make_tail(z, 1.0); }

double hill_standard_error(double gamma, std::size_t m) {
    if (m == 0) throw std::invalid_argument("hill_standard_error: m must be positive");
    return gamma / std::sqrt(static_cast<double>(m));
}

TailEstimate hill(const TailSample& sample, std::size_t m) {
    const auto& x = sample.values;
    if (m < 1 || m + 1 > x.size()) {
        throw std::invalid_argument("hill: m = " + std::to_string(m) + " outside [1, " +
                                    std::to_string(x.size() > 0 ? x.size() - 1 : 0) + "]");
    }
    if (x[0] == x[m]) throw DegenerateSample("hill: top m+1 order statistics are all equal");
    double sum_log = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum_log += std::log(x[j]);
    const double gamma = sum_log / static_cast<double>(m) - std::log(x[m]);
    return make_estimate(gamma, m, TailMethod::fixed_fraction);
}

TailEstimate hill_at_fraction(const TailSample& sample, double fraction) {
    if (!(fraction > 0.0 && fraction < 0.5)) {
        throw std::invalid_argument("hill_at_fraction: fraction must lie in (0, 0.5)");
    }
    const auto m = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(sample.n_total)));
    if (m < 1) throw std::invalid_argument("hill_at_fraction: fraction selects no order statistics");
    return hill(sample, m);
}

HillCurve hill_curve(const TailSample& sample, std::size_t kappa) {
    const auto& x = sample.values;
    if (kappa < 1 || kappa + 1 > x.size()) {
        throw std::invalid_argument("hill_curve: kappa = " + std::to_string(kappa) + " out of range");
    }
    HillCurve curve;
    curve.reserve(kappa);
    double sum_log = 0.0;
    for (std::size_t m = 1; m <= kappa; ++m) {
        sum_log += std::log(x[m - 1]);
        if (x[0] == x[m]) continue;  // undefined: all-equal top order statistics
        curve.push_back({m, sum_log / static_cast<double>(m) - std::log(x[m])});
    }
    return curve;
}

WlsLine hill_regression(const HillCurve& curve) {
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (const auto& p : curve) {
        const double w = std::sqrt(static_cast<double>(p.m));
        sw += w;
        sx += w * static_cast<double>(p.m);
        sy += w * p.gamma;
    }
    if (curve.size() < 2) throw DegenerateSample("hill_regression: fewer than two defined points");
    const double xbar = sx / sw;
    const double ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : curve) {
        const double w = std::sqrt(static_cast<double>(p.m));
        const double dx = static_cast<double>(p.m) - xbar;
        sxx += w * dx * dx;
        sxy += w * dx * (p.gamma - ybar);
    }
    if (!(sxx > 0.0)) throw DegenerateSample("hill_regression: singular design");
    WlsLine line;
    line.slope = sxy / sxx;
    line.intercept = ybar - line.slope * xbar;
    return line;
}

std::size_t default_kappa(const TailSample& sample) {
    // half of the one-sided exceedance sample; reaching into the centre of a
    // two-sided residual sample drives X_(m+1) towards zero and the curve up
    const std::size_t size = sample.values.size();
    return size < 2 ? 0 : std::min(size / 2, size - 1);
}

TailEstimate modified_hill(const TailSample& sample, std::size_t kappa) {
    if (kappa < 10) throw std::invalid_argument("modified_hill: kappa must be at least 10");
    const HillCurve curve = hill_curve(sample, kappa);
    const WlsLine line = hill_regression(curve);
    const double gamma = line.intercept;
    if (!(gamma > 0.0)) throw DegenerateSample("modified_hill: non-positive regression intercept");

    std::size_t best_m = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& p : curve) {
        const double gap = std::fabs(p.gamma - gamma);
        if (gap <= best_gap) {  // later (larger m) wins ties
            best_gap = gap;
            best_m = p.m;
        }
    }
    return make_estimate(gamma, best_m, TailMethod::huisman);
}

}  // namespace condevt
