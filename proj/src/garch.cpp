#include "condevt/garch.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "condevt/errors.hpp"
#include "condevt/nelder_mead.hpp"

namespace condevt {

namespace {

constexpr double kMaxPersistence = 1.0 - 1e-6;
constexpr double kBoundaryFlag = 1.0 - 1e-4;
constexpr std::size_t kMinLikelihoodLength = 10;
constexpr std::size_t kMinFitLength = 250;
constexpr std::size_t kRecommendedFitLength = 1000;

// log density of the innovation, parameterised to have unit variance
struct InnovationDensity {
    explicit InnovationDensity(const GarchParams& p) : normal(p.innovation == Innovation::normal) {
        if (normal) {
            log_const = -0.5 * std::log(2.0 * std::numbers::pi);
        } else {
            log_const = std::lgamma(0.5 * (p.nu + 1.0)) - std::lgamma(0.5 * p.nu) -
                        0.5 * std::log(std::numbers::pi * (p.nu - 2.0));
            exponent = 0.5 * (p.nu + 1.0);
            inv_scale2 = 1.0 / (p.nu - 2.0);
        }
    }
    [[nodiscard]] double operator()(double z) const {
        return normal ? log_const - 0.5 * z * z : log_const - exponent * std::log1p(z * z * inv_scale2);
    }
    bool normal;
    double log_const = 0.0;
    double exponent = 0.0;
    double inv_scale2 = 0.0;
};

double population_variance(std::span<const double> r) {
    const double n = static_cast<double>(r.size());
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    return ss / n;
}

// Calls visit(t, mu_t, sigma2_t) for t = 0..T-1 (0-based).
template <class Visit>
void run_recursion(const GarchParams& p, std::span<const double> r, double sigma2_seed, Visit&& visit) {
    double sigma2 = sigma2_seed;
    visit(std::size_t{0}, 0.0, sigma2);
    for (std::size_t t = 1; t < r.size(); ++t) {
        const double prev = r[t - 1];
        sigma2 = p.alpha0 + p.alpha1 * prev * prev + p.beta1 * sigma2;
        visit(t, p.phi * prev, sigma2);
    }
}

double sum_loglik_unchecked(const GarchParams& p, std::span<const double> r, double sigma2_seed) {
    const InnovationDensity density(p);
    double total = 0.0;
    run_recursion(p, r, sigma2_seed, [&](std::size_t t, double mu, double sigma2) {
        if (t == 0) return;
        if (!(sigma2 > 0.0)) {
            total = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        const double sigma = std::sqrt(sigma2);
        total += density((r[t] - mu) / sigma) - std::log(sigma);
    });
    return total;
}

GarchParams with_vector(GarchParams p, const GarchVector& v) {
    p.phi = v[0];
    p.alpha0 = v[1];
    p.alpha1 = v[2];
    p.beta1 = v[3];
    return p;
}

GarchVector as_vector(const GarchParams& p) { return {p.phi, p.alpha0, p.alpha1, p.beta1}; }

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double u) { return std::log(u / (1.0 - u)); }

// Unconstrained coordinates: atanh(phi), log(alpha0), logit of the scaled
// persistence, logit of alpha1's share of it.
GarchParams from_unconstrained(const GarchParams& model, std::span<const double> x) {
    GarchParams p = model;
    p.phi = std::tanh(x[0]);
    p.alpha0 = std::exp(x[1]);
    const double s = kMaxPersistence * logistic(x[2]);
    const double w = logistic(x[3]);
    p.alpha1 = s * w;
    p.beta1 = s * (1.0 - w);
    return p;
}

std::vector<double> to_unconstrained(const GarchParams& p) {
    const double s = p.alpha1 + p.beta1;
    return {std::atanh(p.phi), std::log(p.alpha0), logit(s / kMaxPersistence), logit(p.alpha1 / s)};
}

struct Curvature {
    Eigen::MatrixXd neg_hessian;  // -d2 mean loglik, free coordinates only
    Eigen::MatrixXd score_outer;  // mean outer product of per-observation scores
    std::vector<std::size_t> index;
    double n_obs = 0.0;
};

Curvature curvature(const GarchParams& params, const ReturnSeries& series, const ParameterMask& free) {
    if (series.size() < kMinLikelihoodLength) {
        throw std::invalid_argument("standard errors need at least 10 observations");
    }
    const auto r = series.values();
    const GarchVector theta = as_vector(params);
    Curvature c;
    for (std::size_t i = 0; i < kGarchDim; ++i) {
        if (free[i]) c.index.push_back(i);
    }
    const std::size_t k = c.index.size();
    if (k == 0) throw std::invalid_argument("standard errors: no free parameters");

    std::vector<double> step(k);
    for (std::size_t a = 0; a < k; ++a) step[a] = 1e-4 * std::max(std::fabs(theta[c.index[a]]), 1e-2);

    auto shifted = [&](std::initializer_list<std::pair<std::size_t, double>> moves) {
        GarchVector v = theta;
        for (auto [a, delta] : moves) v[c.index[a]] += delta;
        return loglik_contributions(with_vector(params, v), r);
    };
    auto mean_of = [](const std::vector<double>& x) {
        return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    };

    const auto base = loglik_contributions(params, r);
    const double base_mean = mean_of(base);
    c.n_obs = static_cast<double>(base.size());

    std::vector<std::vector<double>> plus(k), minus(k);
    for (std::size_t a = 0; a < k; ++a) {
        plus[a] = shifted({{a, step[a]}});
        minus[a] = shifted({{a, -step[a]}});
    }

    Eigen::MatrixXd hess(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        hess(a, a) = (mean_of(plus[a]) - 2.0 * base_mean + mean_of(minus[a])) / (step[a] * step[a]);
        for (std::size_t b = a + 1; b < k; ++b) {
            const double pp = mean_of(shifted({{a, step[a]}, {b, step[b]}}));
            const double pm = mean_of(shifted({{a, step[a]}, {b, -step[b]}}));
            const double mp = mean_of(shifted({{a, -step[a]}, {b, step[b]}}));
            const double mm = mean_of(shifted({{a, -step[a]}, {b, -step[b]}}));
            hess(a, b) = hess(b, a) = (pp - pm - mp + mm) / (4.0 * step[a] * step[b]);
        }
    }
    if (!hess.allFinite()) throw NumericalError("non-finite Hessian of the log-likelihood");

    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd score(k);
    for (std::size_t t = 0; t < base.size(); ++t) {
        for (std::size_t a = 0; a < k; ++a) score(a) = (plus[a][t] - minus[a][t]) / (2.0 * step[a]);
        outer.noalias() += score * score.transpose();
    }
    c.neg_hessian = -hess;
    c.score_outer = outer / c.n_obs;
    return c;
}

Eigen::MatrixXd inverse_information(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    const auto& ev = eig.eigenvalues();
    if (eig.info() != Eigen::Success || !(ev.minCoeff() > 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff()))) {
        throw std::domain_error("singular or indefinite Hessian");
    }
    return eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

GarchVector scatter_se(const Curvature& c, const Eigen::MatrixXd& cov) {
    GarchVector se{0.0, 0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < c.index.size(); ++a) se[c.index[a]] = std::sqrt(std::max(cov(a, a), 0.0));
    return se;
}

}  // namespace

void GarchParams::validate() const {
    if (!std::isfinite(phi) || !std::isfinite(alpha0) || !std::isfinite(alpha1) || !std::isfinite(beta1)) {
        throw std::invalid_argument("GARCH parameters must be finite");
    }
    if (!(alpha0 > 0.0)) throw std::invalid_argument("alpha0 must be positive");
    if (alpha1 < 0.0 || beta1 < 0.0) throw std::invalid_argument("alpha1 and beta1 must be non-negative");
    if (!(alpha1 + beta1 < 1.0)) throw std::invalid_argument("alpha1 + beta1 must be < 1 for stationarity");
    if (innovation == Innovation::student_t && !(nu > 2.0)) {
        throw std::invalid_argument("Student-t degrees of freedom must exceed 2");
    }
}

std::vector<double> loglik_contributions(const GarchParams& params, std::span<const double> r) {
    std::vector<double> out;
    if (r.size() < 2) return out;
    out.reserve(r.size() - 1);
    const InnovationDensity density(params);
    run_recursion(params, r, population_variance(r), [&](std::size_t t, double mu, double sigma2) {
        if (t == 0) return;
        if (!(sigma2 > 0.0)) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            return;
        }
        const double sigma = std::sqrt(sigma2);
        out.push_back(density((r[t] - mu) / sigma) - std::log(sigma));
    });
    return out;
}

double log_likelihood(const GarchParams& params, const ReturnSeries& series) {
    params.validate();
    if (series.size() < kMinLikelihoodLength) {
        throw std::invalid_argument("log_likelihood needs at least 10 observations");
    }
    const auto r = series.values();
    const double seed = population_variance(r);
    if (!(seed > 0.0)) throw DegenerateSample("series has zero variance");
    const double ll = sum_loglik_unchecked(params, r, seed);
    if (!std::isfinite(ll)) throw NumericalError("log-likelihood is not finite at the given parameters");
    return ll;
}

std::vector<GarchParams> starting_points(const ReturnSeries& series, const GarchParams& model) {
    const double var = population_variance(series.values());
    // alpha0 follows the sample variance so the search is scale equivariant
    constexpr std::array<std::pair<double, double>, 3> starts{{{0.05, 0.90}, {0.10, 0.80}, {0.20, 0.70}}};
    std::vector<GarchParams> out;
    for (auto [a1, b1] : starts) {
        GarchParams start = model;
        start.phi = 0.0;
        start.alpha1 = a1;
        start.beta1 = b1;
        start.alpha0 = var * (1.0 - a1 - b1);
        out.push_back(start);
    }
    return out;
}

FitResult fit(const ReturnSeries& series, const GarchParams& model, const OptimizerConfig& config) {
    if (series.size() < kMinFitLength) {
        throw std::invalid_argument("fit needs at least 250 observations, got " + std::to_string(series.size()));
    }
    if (model.innovation == Innovation::student_t && !(model.nu > 2.0)) {
        throw std::invalid_argument("Student-t degrees of freedom must exceed 2");
    }
    const auto r = series.values();
    const double var = population_variance(r);
    if (!(var > 0.0)) throw DegenerateSample("cannot fit a constant series (zero variance)");

    FitResult result;
    if (series.size() < kRecommendedFitLength) {
        result.warnings.push_back("fewer than 1000 observations; estimates may be unstable");
    }

    const double n_terms = static_cast<double>(r.size() - 1);
    auto objective = [&](std::span<const double> x) {
        return -sum_loglik_unchecked(from_unconstrained(model, x), r, var) / n_terms;
    };

    NelderMeadOptions options;
    options.max_iterations = config.max_iterations;
    options.tolerance = config.tolerance;
    options.initial_step = {0.1, 0.5, 0.5, 0.5};

    bool have_best = false;
    NelderMeadResult best;
    int total_iterations = 0;
    for (const GarchParams& start : starting_points(series, model)) {
        auto run = nelder_mead(objective, to_unconstrained(start), options);
        total_iterations += run.iterations;
        // one restart around the optimum guards against a collapsed simplex
        if (run.converged) {
            auto again = nelder_mead(objective, run.x, options);
            total_iterations += again.iterations;
            if (again.value < run.value) run = std::move(again);
        }
        if (!have_best || run.value < best.value) {
            best = run;
            have_best = true;
        }
    }

    result.params = from_unconstrained(model, best.x);
    result.loglik = -best.value * n_terms;
    result.converged = best.converged;
    result.iterations = total_iterations;
    if (!std::isfinite(result.loglik)) throw NumericalError("fit produced a non-finite log-likelihood");
    if (result.params.persistence() > kBoundaryFlag) {
        result.boundary = true;
        result.warnings.push_back("alpha1 + beta1 is at the stationarity boundary");
    }
    if (!result.converged) result.warnings.push_back("optimizer stopped at the iteration limit");

    if (config.compute_standard_errors) {
        try {
            result.robust_se = robust_se(result.params, series);
        } catch (const std::exception& e) {
            result.warnings.push_back(std::string("robust standard errors unavailable: ") + e.what());
        }
    }
    return result;
}

GarchVector robust_se(const GarchParams& params, const ReturnSeries& series, const ParameterMask& free) {
    const Curvature c = curvature(params, series, free);
    const Eigen::MatrixXd a_inv = inverse_information(c.neg_hessian);
    const Eigen::MatrixXd cov = a_inv * c.score_outer * a_inv / c.n_obs;
    return scatter_se(c, cov);
}

GarchVector hessian_se(const GarchParams& params, const ReturnSeries& series, const ParameterMask& free) {
    const Curvature c = curvature(params, series, free);
    return scatter_se(c, inverse_information(c.neg_hessian) / c.n_obs);
}

FilterOutput filter(const GarchParams& params, const ReturnSeries& series) {
    params.validate();
    if (series.empty()) throw std::invalid_argument("filter: empty series");
    const auto r = series.values();
    const double seed = series.size() > 1 ? population_variance(r) : 0.0;
    if (!(seed > 0.0)) throw DegenerateSample("filter: series has zero variance");

    FilterOutput out;
    out.mu.resize(r.size());
    out.sigma.resize(r.size());
    out.z.resize(r.size());
    run_recursion(params, r, seed, [&](std::size_t t, double mu, double sigma2) {
        const double sigma = std::sqrt(sigma2);
        out.mu[t] = mu;
        out.sigma[t] = sigma;
        out.z[t] = (r[t] - mu) / sigma;
    });
    return out;
}

Forecast forecast(const GarchParams& params, const ReturnSeries& series, const FilterOutput& filtered) {
    if (series.empty() || filtered.sigma.size() != series.size()) {
        throw std::invalid_argument("forecast: filter output does not match the series");
    }
    const double last = series[series.size() - 1];
    const double sigma_last = filtered.sigma.back();
    Forecast f;
    f.mu_next = params.phi * last;
    f.sigma_next = std::sqrt(params.alpha0 + params.alpha1 * last * last + params.beta1 * sigma_last * sigma_last);
    return f;
}

ReturnSeries simulate(const GarchParams& params, std::size_t n, std::size_t burn_in, std::uint64_t seed,
                      TConvention convention) {
    if (n < 1) throw std::invalid_argument("simulate: n must be at least 1");
    if (!(params.alpha0 > 0.0) || params.alpha1 < 0.0 || params.beta1 < 0.0) {
        throw std::invalid_argument("simulate: invalid GARCH coefficients");
    }
    const bool t_innov = params.innovation == Innovation::student_t;
    if (t_innov && !(params.nu > 2.0)) throw std::invalid_argument("simulate: nu must exceed 2");

    std::mt19937_64 rng(seed);
    std::student_t_distribution<double> tdist(t_innov ? params.nu : 5.0);
    std::normal_distribution<double> ndist(0.0, 1.0);
    const double t_scale = (t_innov && convention == TConvention::standardized)
                               ? std::sqrt((params.nu - 2.0) / params.nu)
                               : 1.0;
    const double innovation_var = (t_innov && convention == TConvention::raw) ? params.nu / (params.nu - 2.0) : 1.0;

    // start at the unconditional variance when it exists
    const double denom = 1.0 - params.alpha1 * innovation_var - params.beta1;
    double sigma2 = denom > 0.0 ? params.alpha0 / denom : params.alpha0 / std::max(1.0 - params.beta1, 1e-3);
    double prev = 0.0;

    std::vector<double> out;
    out.reserve(n);
    const std::size_t total = n + burn_in;
    for (std::size_t t = 0; t < total; ++t) {
        sigma2 = params.alpha0 + params.alpha1 * prev * prev + params.beta1 * sigma2;
        const double z = t_innov ? t_scale * tdist(rng) : ndist(rng);
        const double r = params.phi * prev + std::sqrt(sigma2) * z;
        prev = r;
        if (t >= burn_in) out.push_back(r);
    }
    if (!std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); })) {
        throw NumericalError("simulated path overflowed (explosive volatility recursion)");
    }
    return ReturnSeries("simulated", std::move(out));
}

}  // namespace condevt
