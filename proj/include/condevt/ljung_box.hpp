#pragma once

#include <cstddef>
#include <span>

namespace condevt {

struct LjungBoxResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags = 0;
};

/// Q = T(T+2) sum_{k=1..K} rho_k^2 / (T-k), referred to chi-square(K).
/// Throws std::invalid_argument unless size > lags >= 1, and
/// DegenerateSample for a constant sequence.
[[nodiscard]] LjungBoxResult ljung_box(std::span<const double> x, std::size_t lags);

}  // namespace condevt
