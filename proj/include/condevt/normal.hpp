#pragma once

namespace condevt {

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x);

/// Upper tail 1 - Phi(x), accurate far into the tail.
[[nodiscard]] double normal_sf(double x);

/// Standard normal quantile, Wichura's AS 241 (PPND16) rational
/// approximation; relative error about 1e-16 over (0, 1).
/// Throws std::invalid_argument unless 0 < p < 1.
[[nodiscard]] double normal_quantile(double p);

}  // namespace condevt
