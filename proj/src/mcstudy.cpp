#include "condevt/mcstudy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "condevt/errors.hpp"

namespace condevt {

namespace {

struct ReplicationOutcome {
    bool ok = false;
    std::string failure;
    std::vector<double> quantiles;      // [h][level] flattened
    std::vector<double> probabilities;  // [h][threshold]
    std::vector<double> violations;     // [h][level]
    double alpha = 0.0;
    double m = 0.0;
};

// Type-7 sample quantile at probability p; reorders v.
double sample_quantile(std::vector<double>& v, double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
    const double a = v[lo];
    if (lo + 1 >= v.size()) return a;
    const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
    return a + (pos - static_cast<double>(lo)) * (b - a);
}

std::vector<double> block_sums(std::span<const double> x, std::size_t h) {
    const std::size_t blocks = x.size() / h;
    std::vector<double> out(blocks, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t i = 0; i < h; ++i) out[b] += x[b * h + i];
    }
    return out;
}

ReplicationOutcome run_replication(const StudyConfig& cfg, std::size_t r) {
    ReplicationOutcome out;
    const std::size_t nh = cfg.horizons.size();
    const std::size_t nl = cfg.quantile_levels.size();
    const std::size_t nt = cfg.probability_thresholds.size();
    try {
        const ReturnSeries series = simulate(cfg.params, cfg.n, cfg.burn_in, cfg.seed + r, cfg.convention);
        GarchParams params = cfg.params;
        if (cfg.refit) params = fit(series, cfg.params, cfg.optimizer).params;
        const FilterOutput filtered = filter(params, series);
        const TailSample sample = downside_tail(filtered.z);
        TailEstimate tail;
        if (cfg.tail_method == TailMethod::huisman) {
            tail = modified_hill(sample, cfg.kappa ? std::min(*cfg.kappa, default_kappa(sample)) : default_kappa(sample));
        } else {
            tail = hill_at_fraction(sample, cfg.tail_fraction);
        }
        const TailRiskModel model = TailRiskModel::from_sample(sample, tail);
        const Forecast fc = forecast(params, series, filtered);
        const auto returns = series.values();

        out.quantiles.resize(nh * nl);
        out.probabilities.resize(nh * nt);
        out.violations.resize(nh * nl);
        for (std::size_t a = 0; a < nh; ++a) {
            const std::size_t h = cfg.horizons[a];
            for (std::size_t b = 0; b < nl; ++b) {
                const double p = 1.0 - cfg.quantile_levels[b];
                out.quantiles[a * nl + b] = conditional_quantile(fc, model, p, h, Extrapolation::empirical_inside).value;
                out.violations[a * nl + b] =
                    static_cast<double>(conditional_violations(returns, filtered, model, p, h));
            }
            for (std::size_t c = 0; c < nt; ++c) {
                out.probabilities[a * nt + c] =
                    conditional_probability(fc, model, cfg.probability_thresholds[c], h, Extrapolation::empirical_inside)
                        .value;
            }
        }
        out.alpha = tail.alpha;
        out.m = static_cast<double>(tail.m);
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.failure = "replication " + std::to_string(r) + ": " + e.what();
    }
    return out;
}

}  // namespace

void StudyConfig::validate() const {
    if (replications < 1) throw std::invalid_argument("study: replications must be at least 1");
    if (n < 100) throw std::invalid_argument("study: n must be at least 100");
    if (horizons.empty()) throw std::invalid_argument("study: no horizons");
    for (auto h : horizons) {
        if (h < 1) throw std::invalid_argument("study: horizons must be >= 1");
    }
    for (double l : quantile_levels) {
        if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("study: quantile levels must lie in (0, 1)");
    }
    if (oracle_n != 0 && oracle_n < 1'000'000) throw std::invalid_argument("study: oracle_n must be >= 1e6");
}

double expected_violations(std::size_t n, std::size_t h, double level) {
    if (h < 1) throw std::invalid_argument("expected_violations: h must be >= 1");
    return static_cast<double>(n / h) * (1.0 - level);
}

std::size_t backtest_violations(std::span<const double> returns, double quantile_loss, std::size_t h) {
    if (h < 1) throw std::invalid_argument("backtest_violations: h must be >= 1");
    if (returns.size() < h) throw std::invalid_argument("backtest_violations: series shorter than one block");
    std::size_t count = 0;
    for (double s : block_sums(returns, h)) {
        if (s < -quantile_loss) ++count;
    }
    return count;
}

std::size_t backtest_violations(std::span<const double> returns, std::span<const double> block_losses,
                                std::size_t h) {
    if (h < 1) throw std::invalid_argument("backtest_violations: h must be >= 1");
    if (returns.size() < h) throw std::invalid_argument("backtest_violations: series shorter than one block");
    const auto sums = block_sums(returns, h);
    if (block_losses.size() != sums.size()) {
        throw std::invalid_argument("backtest_violations: need one loss threshold per block");
    }
    std::size_t count = 0;
    for (std::size_t b = 0; b < sums.size(); ++b) {
        if (sums[b] < -block_losses[b]) ++count;
    }
    return count;
}

std::size_t conditional_violations(std::span<const double> returns, const FilterOutput& filtered,
                                   const TailRiskModel& model, double p, std::size_t h) {
    if (filtered.sigma.size() != returns.size() || filtered.mu.size() != returns.size()) {
        throw std::invalid_argument("conditional_violations: filter output does not match the series");
    }
    const double q = h == 1 ? 1.0 : scaling_factor(h, model.tail().alpha).q;
    const double zq = q * tail_quantile_std(model, p, Extrapolation::empirical_inside);
    const std::size_t blocks = returns.size() / h;
    std::vector<double> losses(blocks);
    for (std::size_t k = 0; k < blocks; ++k) {
        const std::size_t s = k * h;
        losses[k] = filtered.sigma[s] * zq - filtered.mu[s];
    }
    return backtest_violations(returns, losses, h);
}

OracleTargets oracle_targets(const GarchParams& params, TConvention convention, std::span<const std::size_t> horizons,
                             std::span<const double> levels, std::span<const double> thresholds, std::size_t big_n,
                             std::uint64_t seed) {
    if (big_n < 1'000'000) throw std::invalid_argument("oracle_targets: big_n must be at least 1e6");
    const ReturnSeries path = simulate(params, big_n, 1000, seed, convention);
    OracleTargets targets;
    for (std::size_t h : horizons) {
        if (h < 1) throw std::invalid_argument("oracle_targets: horizons must be >= 1");
        auto sums = block_sums(path.values(), h);
        std::vector<double> probs;
        for (double x : thresholds) {
            const auto hits = std::count_if(sums.begin(), sums.end(), [x](double s) { return s < -x; });
            probs.push_back(static_cast<double>(hits) / static_cast<double>(sums.size()));
        }
        std::vector<double> qs;
        for (double level : levels) qs.push_back(-sample_quantile(sums, 1.0 - level));
        targets.quantiles.push_back(std::move(qs));
        targets.probabilities.push_back(std::move(probs));
    }
    return targets;
}

StudyReport run_study(const StudyConfig& config) {
    config.validate();
    const std::size_t reps = config.replications;
    std::vector<ReplicationOutcome> outcomes(reps);

    unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next++; r < reps; r = next++) outcomes[r] = run_replication(config, r);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    const std::size_t nh = config.horizons.size();
    const std::size_t nl = config.quantile_levels.size();
    const std::size_t nt = config.probability_thresholds.size();
    std::vector<double> q_sum(nh * nl, 0.0), p_sum(nh * nt, 0.0), v_sum(nh * nl, 0.0);

    StudyReport report;
    double alpha_sum = 0.0, m_sum = 0.0;
    // reduce in replication order so the result does not depend on scheduling
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++report.excluded;
            report.exclusion_reasons.push_back(o.failure);
            continue;
        }
        ++report.used;
        for (std::size_t i = 0; i < q_sum.size(); ++i) q_sum[i] += o.quantiles[i];
        for (std::size_t i = 0; i < p_sum.size(); ++i) p_sum[i] += o.probabilities[i];
        for (std::size_t i = 0; i < v_sum.size(); ++i) v_sum[i] += o.violations[i];
        alpha_sum += o.alpha;
        m_sum += o.m;
    }
    if (static_cast<double>(report.excluded) > 0.05 * static_cast<double>(reps) || report.used == 0) {
        throw std::runtime_error("study failed: " + std::to_string(report.excluded) + " of " +
                                 std::to_string(reps) + " replications excluded" +
                                 (report.exclusion_reasons.empty() ? "" : "; first: " + report.exclusion_reasons[0]));
    }

    std::optional<OracleTargets> oracle;
    if (config.oracle_n > 0) {
        oracle = oracle_targets(config.params, config.convention, config.horizons, config.quantile_levels,
                                config.probability_thresholds, config.oracle_n, config.oracle_seed);
    }

    const double used = static_cast<double>(report.used);
    for (std::size_t a = 0; a < nh; ++a) {
        const std::size_t h = config.horizons[a];
        for (std::size_t b = 0; b < nl; ++b) {
            QuantileCell cell{config.quantile_levels[b], h, q_sum[a * nl + b] / used, std::nullopt};
            if (oracle) cell.oracle = oracle->quantiles[a][b];
            report.quantiles.push_back(cell);
            report.violations.push_back({config.quantile_levels[b], h, v_sum[a * nl + b] / used,
                                         expected_violations(config.n, h, config.quantile_levels[b])});
        }
        for (std::size_t c = 0; c < nt; ++c) {
            ProbabilityCell cell{config.probability_thresholds[c], h, p_sum[a * nt + c] / used, std::nullopt};
            if (oracle) cell.oracle = oracle->probabilities[a][c];
            report.probabilities.push_back(cell);
        }
    }
    report.mean_alpha = alpha_sum / used;
    report.mean_m = m_sum / used;
    return report;
}

}  // namespace condevt
