#include "condevt/ljung_box.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "condevt/errors.hpp"

namespace condevt {

LjungBoxResult ljung_box(std::span<const double> x, std::size_t lags) {
    const std::size_t n = x.size();
    if (lags < 1) throw std::invalid_argument("ljung_box: need at least one lag");
    if (n <= lags) throw std::invalid_argument("ljung_box: number of lags must be < number of observations");

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - mean;
    double c0 = 0.0;
    for (double v : d) c0 += v * v;
    if (!(c0 > 0.0)) throw DegenerateSample("ljung_box: constant sequence");

    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t) ck += d[t] * d[t - k];
        const double rho = ck / c0;
        q += rho * rho / static_cast<double>(n - k);
    }
    const double nn = static_cast<double>(n);
    q *= nn * (nn + 2.0);

    LjungBoxResult res;
    res.statistic = q;
    res.lags = lags;
    res.p_value = q > 0.0 ? boost::math::gamma_q(0.5 * static_cast<double>(lags), 0.5 * q) : 1.0;
    return res;
}

}  // namespace condevt
