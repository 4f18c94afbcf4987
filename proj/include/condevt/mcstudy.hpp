#pragma once

// Replication harness for the simulated GARCH-t scaling study: simulate,
// fit, filter, estimate the downside tail, compute quantile and probability
// estimates per horizon, and count violations on non-overlapping h-blocks.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condevt/garch.hpp"
#include "condevt/risk.hpp"
#include "condevt/tail.hpp"

namespace condevt {

struct StudyConfig {
    std::size_t n = 2000;
    std::size_t replications = 200;
    std::size_t burn_in = 1000;
    GarchParams params{0.0, 0.1, 0.15, 0.8, 4.0, Innovation::student_t};
    std::vector<std::size_t> horizons{1, 2, 4, 5};
    std::vector<double> quantile_levels{0.95, 0.99};
    std::vector<double> probability_thresholds{25.0, 50.0};  // loss thresholds, percent returns
    std::uint64_t seed = 1;
    TConvention convention = TConvention::standardized;
    bool refit = true;  // false: filter with the true parameters
    TailMethod tail_method = TailMethod::huisman;
    double tail_fraction = 0.05;          // fixed-fraction method only
    std::optional<std::size_t> kappa;     // huisman window; default half the exceedances
    OptimizerConfig optimizer{500, 1e-9, false};
    std::size_t oracle_n = 0;             // 0 skips the oracle
    std::uint64_t oracle_seed = 7;
    unsigned threads = 0;                 // 0: hardware concurrency

    void validate() const;
};

struct QuantileCell {
    double level = 0.0;
    std::size_t h = 1;
    double mean_estimate = 0.0;
    std::optional<double> oracle;
};

struct ProbabilityCell {
    double threshold = 0.0;
    std::size_t h = 1;
    double mean_estimate = 0.0;
    std::optional<double> oracle;
};

struct ViolationCell {
    double level = 0.0;
    std::size_t h = 1;
    double mean_actual = 0.0;
    double expected = 0.0;
};

struct StudyReport {
    std::vector<QuantileCell> quantiles;
    std::vector<ProbabilityCell> probabilities;
    std::vector<ViolationCell> violations;
    std::size_t used = 0;
    std::size_t excluded = 0;
    std::vector<std::string> exclusion_reasons;
    double mean_alpha = 0.0;
    double mean_m = 0.0;
};

struct OracleTargets {
    // quantile loss of h-block sums, indexed [h][level]
    std::vector<std::vector<double>> quantiles;
    // P(block sum < -threshold), indexed [h][threshold]
    std::vector<std::vector<double>> probabilities;
};

/// floor(n/h) * (1 - level).
[[nodiscard]] double expected_violations(std::size_t n, std::size_t h, double level);

/// Blocks of h consecutive returns whose sum falls below -quantile_loss.
[[nodiscard]] std::size_t backtest_violations(std::span<const double> returns, double quantile_loss, std::size_t h);

/// As above with one loss threshold per block (size floor(n/h)).
[[nodiscard]] std::size_t backtest_violations(std::span<const double> returns, std::span<const double> block_losses,
                                              std::size_t h);

/// In-sample conditional backtest: the block starting at s counts when its
/// sum falls below -(sigma_s h^(1/alpha) Q_z(p) - mu_s).
[[nodiscard]] std::size_t conditional_violations(std::span<const double> returns, const FilterOutput& filtered,
                                                 const TailRiskModel& model, double p, std::size_t h);
/// Empirical h-block quantiles and exceedance frequencies on one long
/// simulated path (burn-in 1000). Requires big_n >= 1e6.
[[nodiscard]] OracleTargets oracle_targets(const GarchParams& params, TConvention convention,
                                           std::span<const std::size_t> horizons, std::span<const double> levels,
                                           std::span<const double> thresholds, std::size_t big_n,
                                           std::uint64_t seed);

/// Throws std::runtime_error when more than 5% of replications fail.
[[nodiscard]] StudyReport run_study(const StudyConfig& config);

}  // namespace condevt
