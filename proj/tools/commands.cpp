#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "condevt/data_io.hpp"
#include "condevt/errors.hpp"
#include "condevt/garch.hpp"
#include "condevt/ljung_box.hpp"
#include "condevt/mcstudy.hpp"
#include "condevt/normal.hpp"
#include "condevt/report.hpp"
#include "condevt/risk.hpp"
#include "condevt/serialize.hpp"
#include "condevt/tail.hpp"
#include "config.hpp"

namespace condevt::cli {

namespace {

using nlohmann::json;

class FitFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string format = "table";
    std::string output;

    std::string input;
    std::string input_format = "return";
    std::string column = "1";
    std::string date_column = "0";
    std::string delimiter = ",";

    std::string model_in;
    std::string model_out;
    double nu = 4.0;
    int max_iterations = 500;
    std::size_t lags = 12;

    std::string tail_method = "huisman";
    std::size_t kappa = 0;
    std::string curve_out;
    std::string qq_out;

    std::vector<std::size_t> horizons;
    std::vector<double> levels;
    std::vector<double> thresholds;
    bool no_benchmark = false;
    bool strict = false;

    std::size_t n = 0;
    std::size_t burn_in = 1000;
    double phi = 0.0;
    double alpha0 = 0.1;
    double alpha1 = 0.15;
    double beta1 = 0.8;
    std::string convention = "std-t";
    std::string start_date;

    std::size_t replications = 200;
    bool quick = false;
    bool true_params = false;
    std::size_t oracle_n = 0;
    unsigned threads = 0;

    double quantile = 0.0;
    std::size_t h = 1;
};

// One command's result: named tables for delimited output, and the JSON
// document (tables as records plus any extra fields).
struct Output {
    std::vector<std::pair<std::string, Table>> tables;
    json document = json::object();
};

std::string fixed(double v, int precision = 4) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

std::string paired(double v, const std::optional<double>& other) {
    return other ? fixed(v) + " (" + fixed(*other) + ")" : fixed(v);
}

std::string label(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

void check_levels(const std::vector<double>& levels) {
    for (double l : levels) {
        if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("levels must lie in (0, 1), got " + label(l));
    }
}

void check_horizons(const std::vector<std::size_t>& hs) {
    for (auto h : hs) {
        if (h < 1) throw std::invalid_argument("horizons must be >= 1");
    }
}

ReturnSeries load_input(const Settings& s) {
    if (s.input.empty()) throw InputError("no input series given (use --input)");
    ColumnSpec spec;
    if (all_digits(s.column)) {
        spec.value_index = std::stoul(s.column);
    } else {
        spec.value_name = s.column;
    }
    if (s.date_column == "none" || s.date_column.empty()) {
        spec.date_index.reset();
    } else if (all_digits(s.date_column)) {
        spec.date_index = std::stoul(s.date_column);
    } else {
        spec.date_name = s.date_column;
        spec.date_index.reset();
    }
    if (s.delimiter == "tab" || s.delimiter == "\\t") {
        spec.delimiter = '\t';
    } else if (s.delimiter.size() == 1) {
        spec.delimiter = s.delimiter[0];
    } else {
        throw InputError("delimiter must be a single character or 'tab'");
    }
    SeriesFormat format = SeriesFormat::returns;
    if (s.input_format == "price") {
        format = SeriesFormat::price;
    } else if (s.input_format != "return") {
        throw InputError("input format must be 'price' or 'return'");
    }
    return load_series(s.input, format, spec);
}

GarchParams model_template(const Settings& s, Innovation innovation = Innovation::student_t) {
    GarchParams p;
    p.nu = s.nu;
    p.innovation = innovation;
    return p;
}

FitResult run_fit(const ReturnSeries& series, const GarchParams& model, const Settings& s) {
    try {
        return fit(series, model, OptimizerConfig{s.max_iterations, 1e-9, true});
    } catch (const NumericalError& e) {
        throw FitFailure(std::string("fit failed: ") + e.what());
    } catch (const DegenerateSample& e) {
        throw FitFailure(std::string("fit failed: ") + e.what());
    }
}

FitResult load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    json j;
    try {
        in >> j;
        return (j.contains("fit") ? j.at("fit") : j).get<FitResult>();
    } catch (const json::exception& e) {
        throw InputError("malformed model file '" + path + "': " + e.what());
    }
}

FitResult obtain_model(const ReturnSeries& series, const Settings& s, std::ostream& err) {
    FitResult result = s.model_in.empty() ? run_fit(series, model_template(s), s) : load_model(s.model_in);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    return result;
}

double two_sided_p(double estimate, double se) {
    if (!(se > 0.0)) return std::nan("");
    return 2.0 * normal_sf(std::fabs(estimate / se));
}

std::vector<double> squared(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out) v *= v;
    return out;
}

json series_info(const ReturnSeries& series) {
    json j{{"name", series.name()}, {"n", series.size()}};
    const auto& d = series.dates();
    if (!d.empty() && !d.front().empty()) {
        j["first_date"] = d.front();
        j["last_date"] = d.back();
    }
    return j;
}

Output cmd_fit(const Settings& s, std::ostream& err) {
    const ReturnSeries series = load_input(s);
    const FitResult result = obtain_model(series, s, err);
    const FilterOutput filtered = filter(result.params, series);

    const auto r = series.values();
    const std::span<const double> z(filtered.z);
    const auto r2 = squared(r);
    const auto z2 = squared(z);
    const LjungBoxResult lb[4] = {ljung_box(r, s.lags), ljung_box(r2, s.lags), ljung_box(z, s.lags),
                                  ljung_box(z2, s.lags)};

    const std::string k = "(" + std::to_string(s.lags) + ")";
    Table diag;
    diag.columns = {"row", "phi", "alpha0", "alpha1", "beta1", "R" + k, "R2" + k, "Z" + k, "Z2" + k};
    const auto& p = result.params;
    const GarchVector est{p.phi, p.alpha0, p.alpha1, p.beta1};
    std::vector<Table::Cell> values{std::string("estimate")}, ses{std::string("robust_se")},
        pvals{std::string("p_value")};
    for (std::size_t i = 0; i < kGarchDim; ++i) {
        values.emplace_back(est[i]);
        if (result.robust_se) {
            ses.emplace_back((*result.robust_se)[i]);
            pvals.emplace_back(two_sided_p(est[i], (*result.robust_se)[i]));
        } else {
            ses.emplace_back(std::monostate{});
            pvals.emplace_back(std::monostate{});
        }
    }
    for (const auto& t : lb) {
        values.emplace_back(t.statistic);
        ses.emplace_back(std::monostate{});
        pvals.emplace_back(t.p_value);
    }
    diag.add_row(values);
    diag.add_row(ses);
    diag.add_row(pvals);

    const SummaryStats rs = summary_stats(r);
    const SummaryStats zs = summary_stats(z);
    Table summary;
    summary.columns = {"series", "n", "mean", "sd", "skewness", "kurtosis"};
    summary.add_row({std::string("returns"), static_cast<long long>(rs.n), rs.mean, rs.sd, rs.skewness, rs.kurtosis});
    summary.add_row(
        {std::string("residuals"), static_cast<long long>(zs.n), zs.mean, zs.sd, zs.skewness, zs.kurtosis});

    Table info;
    info.columns = {"loglik", "nu", "converged", "boundary", "iterations"};
    info.add_row({result.loglik, p.nu, std::string(result.converged ? "yes" : "no"),
                  std::string(result.boundary ? "yes" : "no"), static_cast<long long>(result.iterations)});

    Output out;
    out.tables = {{"diagnostics", diag}, {"summary", summary}, {"fit", info}};
    out.document["series"] = series_info(series);
    out.document["fit"] = result;
    out.document["ljung_box"] = json{{"R", lb[0]}, {"R2", lb[1]}, {"Z", lb[2]}, {"Z2", lb[3]}};
    out.document["summary"] = json{{"returns", rs}, {"residuals", zs}};

    if (!s.model_out.empty()) {
        std::ofstream f(s.model_out);
        if (!f) throw InputError("cannot write model file '" + s.model_out + "'");
        json model{{"series", out.document["series"]}, {"fit", result}, {"ljung_box", out.document["ljung_box"]}};
        f << model.dump(2) << '\n';
    }
    return out;
}

Output cmd_filter(const Settings& s, std::ostream& err) {
    const ReturnSeries series = load_input(s);
    const FitResult result = obtain_model(series, s, err);
    const FilterOutput filtered = filter(result.params, series);
    const Forecast fc = forecast(result.params, series, filtered);

    Table t;
    t.columns = {"date", "return", "mu", "sigma", "z"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string& d = series.dates()[i];
        t.add_row({d.empty() ? Table::Cell{static_cast<long long>(i + 1)} : Table::Cell{d}, series[i],
                   filtered.mu[i], filtered.sigma[i], filtered.z[i]});
    }
    Table f;
    f.columns = {"mu_next", "sigma_next"};
    f.add_row({fc.mu_next, fc.sigma_next});

    if (!s.qq_out.empty()) {
        std::ofstream q(s.qq_out);
        if (!q) throw InputError("cannot write '" + s.qq_out + "'");
        Table qq;
        qq.columns = {"theoretical", "empirical"};
        for (const auto& pt : qq_data(filtered.z)) qq.add_row({pt.theoretical, pt.empirical});
        write_delimited(q, qq, ',', 8);
    }

    Output out;
    out.tables = {{"filtered", t}, {"forecast", f}};
    out.document["params"] = result.params;
    return out;
}

struct TailChoice {
    TailMethod method = TailMethod::huisman;
    double fraction = 0.05;
};

TailChoice parse_tail_method(const std::string& m) {
    if (m == "huisman") return {TailMethod::huisman, 0.0};
    if (m == "fraction1") return {TailMethod::fixed_fraction, 0.01};
    if (m == "fraction5") return {TailMethod::fixed_fraction, 0.05};
    throw std::invalid_argument("tail method must be fraction1, fraction5 or huisman, got '" + m + "'");
}

TailEstimate estimate_tail(const TailSample& sample, const TailChoice& choice, std::size_t kappa) {
    if (choice.method == TailMethod::fixed_fraction) return hill_at_fraction(sample, choice.fraction);
    return modified_hill(sample, kappa > 0 ? kappa : default_kappa(sample));
}

Output cmd_tail(const Settings& s, std::ostream& err) {
    const ReturnSeries series = load_input(s);
    const FitResult result = obtain_model(series, s, err);
    const FilterOutput filtered = filter(result.params, series);
    const TailSample sample = downside_tail(filtered.z);

    Table t;
    t.columns = {"method", "m", "gamma", "alpha", "gamma_se", "alpha_se"};
    json estimates = json::array();
    for (const std::string name : {"fraction1", "fraction5", "huisman"}) {
        TailEstimate e;
        try {
            e = estimate_tail(sample, parse_tail_method(name), s.kappa);
        } catch (const DegenerateSample& ex) {
            err << "warning: " << name << ": " << ex.what() << '\n';
            continue;
        }
        t.add_row({name, static_cast<long long>(e.m), e.gamma, e.alpha, e.standard_error,
                   hill_standard_error(e.alpha, e.m)});
        json j = e;
        j["name"] = name;
        estimates.push_back(j);
    }

    if (!s.curve_out.empty()) {
        std::ofstream c(s.curve_out);
        if (!c) throw InputError("cannot write '" + s.curve_out + "'");
        const std::size_t kappa = s.kappa > 0 ? s.kappa : default_kappa(sample);
        Table curve;
        curve.columns = {"m", "gamma", "alpha"};
        for (const auto& pt : hill_curve(sample, kappa)) {
            curve.add_row({static_cast<long long>(pt.m), pt.gamma, 1.0 / pt.gamma});
        }
        write_delimited(c, curve, ',', 8);
    }

    Output out;
    out.tables = {{"tail", t}};
    out.document["exceedances"] = sample.values.size();
    out.document["n"] = sample.n_total;
    return out;
}

Output cmd_risk(const Settings& s, std::ostream& err) {
    const std::vector<std::size_t> horizons = s.horizons.empty() ? std::vector<std::size_t>{1, 2, 4, 5} : s.horizons;
    const std::vector<double> levels = s.levels.empty() ? std::vector<double>{0.95, 0.995} : s.levels;
    const std::vector<double> thresholds = s.thresholds.empty() ? std::vector<double>{5.0, 2.0} : s.thresholds;
    check_horizons(horizons);
    check_levels(levels);

    const ReturnSeries series = load_input(s);
    const FitResult result = obtain_model(series, s, err);
    const FilterOutput filtered = filter(result.params, series);
    const Forecast fc = forecast(result.params, series, filtered);
    const TailSample sample = downside_tail(filtered.z);
    const TailEstimate tail = estimate_tail(sample, parse_tail_method(s.tail_method), s.kappa);
    const TailRiskModel model = TailRiskModel::from_sample(sample, tail);
    const Extrapolation region = s.strict ? Extrapolation::tail_only : Extrapolation::empirical_inside;

    std::optional<Forecast> gauss;
    if (!s.no_benchmark) {
        const FitResult g = run_fit(series, model_template(s, Innovation::normal), s);
        gauss = forecast(g.params, series, filter(g.params, series));
    }

    Table t;
    t.columns = {"measure", "level"};
    for (auto h : horizons) t.columns.push_back("h=" + std::to_string(h));
    json records = json::array();
    auto record = [&](const std::string& measure, double level, const RiskEstimate& e) {
        const double v = e.kind == RiskKind::probability ? 100.0 * e.value : e.value;
        records.push_back({{"measure", measure},
                           {"level", level},
                           {"h", e.horizon},
                           {"method", to_string(e.method)},
                           {"value", v},
                           {"scaling", e.scaling},
                           {"capped", e.capped}});
        return v;
    };

    for (double x : thresholds) {
        std::vector<Table::Cell> row{std::string("P"), label(x)};
        for (auto h : horizons) {
            const double v = record("P", x, conditional_probability(fc, model, x, h, region));
            std::optional<double> g;
            if (gauss) g = record("P", x, gaussian_probability(*gauss, x, h));
            row.emplace_back(paired(v, g));
        }
        t.add_row(row);
    }
    for (double level : levels) {
        const double p = 1.0 - level;
        std::vector<Table::Cell> row{std::string("Q"), label(100.0 * level)};
        for (auto h : horizons) {
            const double v = record("Q", 100.0 * level, conditional_quantile(fc, model, p, h, region));
            std::optional<double> g;
            if (gauss) g = record("Q", 100.0 * level, gaussian_quantile(*gauss, p, h));
            row.emplace_back(paired(v, g));
        }
        t.add_row(row);
    }

    Output out;
    out.tables = {{"risk", t}};
    out.document["risk"] = records;
    out.document["units"] = "percent";
    out.document["tail"] = tail;
    out.document["forecast"] = fc;
    if (gauss) out.document["gaussian_forecast"] = *gauss;
    return out;
}

std::vector<std::string> business_days(const std::string& start, std::size_t n) {
    using namespace std::chrono;
    int y = 0;
    unsigned m = 0, d = 0;
    char a = 0, b = 0;
    std::istringstream is(start);
    if (!(is >> y >> a >> m >> b >> d) || a != '-' || b != '-') {
        throw std::invalid_argument("start date must be YYYY-MM-DD, got '" + start + "'");
    }
    const year_month_day first{year{y}, month{m}, day{d}};
    if (!first.ok()) throw std::invalid_argument("invalid start date '" + start + "'");
    sys_days day_ = first;
    std::vector<std::string> out;
    out.reserve(n);
    while (out.size() < n) {
        const weekday wd{day_};
        if (wd != Saturday && wd != Sunday) {
            const year_month_day ymd{day_};
            char buf[16];
            std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                          static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
            out.emplace_back(buf);
        }
        day_ += days{1};
    }
    return out;
}

GarchParams true_params(const Settings& s) {
    GarchParams p{s.phi, s.alpha0, s.alpha1, s.beta1, s.nu, Innovation::student_t};
    p.validate();
    return p;
}

Output cmd_simulate(const Settings& s, std::ostream&) {
    const std::size_t n = s.n > 0 ? s.n : 2000;
    const ReturnSeries path = simulate(true_params(s), n, s.burn_in, s.seed, parse_convention(s.convention));
    Table t;
    if (!s.start_date.empty()) {
        const auto dates = business_days(s.start_date, n);
        t.columns = {"date", "return"};
        for (std::size_t i = 0; i < n; ++i) t.add_row({dates[i], path[i]});
    } else {
        t.columns = {"t", "return"};
        for (std::size_t i = 0; i < n; ++i) t.add_row({static_cast<long long>(i + 1), path[i]});
    }
    Output out;
    out.tables = {{"", t}};
    out.document["params"] = true_params(s);
    out.document["convention"] = s.convention;
    out.document["seed"] = s.seed;
    return out;
}

Output cmd_study(const Settings& s, std::ostream& err) {
    StudyConfig cfg;
    cfg.n = s.n > 0 ? s.n : (s.quick ? 500 : 2000);
    cfg.replications = s.quick ? 2 : s.replications;
    cfg.burn_in = s.burn_in;
    cfg.params = true_params(s);
    if (!s.horizons.empty()) cfg.horizons = s.horizons;
    if (!s.levels.empty()) cfg.quantile_levels = s.levels;
    if (!s.thresholds.empty()) cfg.probability_thresholds = s.thresholds;
    check_horizons(cfg.horizons);
    check_levels(cfg.quantile_levels);
    cfg.seed = s.seed;
    cfg.convention = parse_convention(s.convention);
    cfg.refit = !s.true_params;
    const TailChoice choice = parse_tail_method(s.tail_method);
    cfg.tail_method = choice.method;
    if (choice.method == TailMethod::fixed_fraction) cfg.tail_fraction = choice.fraction;
    if (s.kappa > 0) cfg.kappa = s.kappa;
    cfg.optimizer = OptimizerConfig{s.max_iterations, 1e-9, false};
    cfg.oracle_n = s.oracle_n;
    cfg.threads = s.threads;

    const StudyReport report = run_study(cfg);
    for (const auto& reason : report.exclusion_reasons) err << "excluded: " << reason << '\n';

    Table t;
    t.columns = {"measure", "level"};
    for (auto h : cfg.horizons) t.columns.push_back("h=" + std::to_string(h));
    auto find_p = [&](double x, std::size_t h) {
        return *std::find_if(report.probabilities.begin(), report.probabilities.end(),
                             [&](const ProbabilityCell& c) { return c.threshold == x && c.h == h; });
    };
    auto find_q = [&](double l, std::size_t h) {
        return *std::find_if(report.quantiles.begin(), report.quantiles.end(),
                             [&](const QuantileCell& c) { return c.level == l && c.h == h; });
    };
    auto find_v = [&](double l, std::size_t h) {
        return *std::find_if(report.violations.begin(), report.violations.end(),
                             [&](const ViolationCell& c) { return c.level == l && c.h == h; });
    };
    auto pct = [](const std::optional<double>& v) { return v ? std::optional<double>(100.0 * *v) : std::nullopt; };
    for (double x : cfg.probability_thresholds) {
        std::vector<Table::Cell> row{std::string("P"), label(x)};
        for (auto h : cfg.horizons) {
            const auto c = find_p(x, h);
            row.emplace_back(paired(100.0 * c.mean_estimate, pct(c.oracle)));
        }
        t.add_row(row);
    }
    for (double l : cfg.quantile_levels) {
        std::vector<Table::Cell> row{std::string("Q"), label(100.0 * l)};
        for (auto h : cfg.horizons) {
            const auto c = find_q(l, h);
            row.emplace_back(paired(c.mean_estimate, c.oracle));
        }
        t.add_row(row);
    }
    for (double l : cfg.quantile_levels) {
        std::vector<Table::Cell> row{std::string("violations"), label(100.0 * l)};
        for (auto h : cfg.horizons) {
            const auto c = find_v(l, h);
            row.emplace_back(paired(c.mean_actual, c.expected));
        }
        t.add_row(row);
    }

    Table info;
    info.columns = {"replications_used", "replications_excluded", "mean_alpha", "mean_m"};
    info.add_row({static_cast<long long>(report.used), static_cast<long long>(report.excluded), report.mean_alpha,
                  report.mean_m});

    json doc = report;
    for (auto& c : doc["probabilities"]) {
        c["mean_estimate"] = 100.0 * c["mean_estimate"].get<double>();
        if (!c["oracle"].is_null()) c["oracle"] = 100.0 * c["oracle"].get<double>();
    }
    for (auto& c : doc["quantiles"]) c["level"] = 100.0 * c["level"].get<double>();
    for (auto& c : doc["violations"]) c["level"] = 100.0 * c["level"].get<double>();

    Output out;
    out.tables = {{"study", t}, {"summary", info}};
    out.document["study"] = doc;
    out.document["units"] = "percent";
    out.document["config"] = json{{"n", cfg.n},
                                  {"replications", cfg.replications},
                                  {"seed", cfg.seed},
                                  {"convention", to_string(cfg.convention)},
                                  {"params", cfg.params},
                                  {"tail_method", s.tail_method},
                                  {"refit", cfg.refit}};
    return out;
}

Output cmd_backtest(const Settings& s, std::ostream& err) {
    const std::vector<std::size_t> horizons = s.horizons.empty() ? std::vector<std::size_t>{1, 2, 4, 5} : s.horizons;
    const std::vector<double> levels = s.levels.empty() ? std::vector<double>{0.95, 0.99} : s.levels;
    check_horizons(horizons);
    check_levels(levels);
    const ReturnSeries series = load_input(s);
    const auto returns = series.values();

    Table t;
    t.columns = {"level", "h", "blocks", "violations", "expected"};
    if (s.quantile > 0.0) {
        const std::size_t v = backtest_violations(returns, s.quantile, s.h);
        t.columns[0] = "quantile";
        t.add_row({s.quantile, static_cast<long long>(s.h), static_cast<long long>(returns.size() / s.h),
                   static_cast<long long>(v), std::monostate{}});
    } else {
        const FitResult result = obtain_model(series, s, err);
        const FilterOutput filtered = filter(result.params, series);
        const TailSample sample = downside_tail(filtered.z);
        const TailEstimate tail = estimate_tail(sample, parse_tail_method(s.tail_method), s.kappa);
        const TailRiskModel model = TailRiskModel::from_sample(sample, tail);
        for (double level : levels) {
            for (auto h : horizons) {
                const std::size_t v = conditional_violations(returns, filtered, model, 1.0 - level, h);
                t.add_row({100.0 * level, static_cast<long long>(h), static_cast<long long>(returns.size() / h),
                           static_cast<long long>(v), expected_violations(returns.size(), h, level)});
            }
        }
    }
    Output out;
    out.tables = {{"backtest", t}};
    return out;
}

void apply_config(CLI::App& app, const ConfigFile& cfg, const std::string& section) {
    for (CLI::Option* opt : app.get_options()) {
        if (opt->count() > 0) continue;
        for (const auto& name : opt->get_lnames()) {
            if (name == "config" || name == "help") continue;
            std::string alt = name;
            std::replace(alt.begin(), alt.end(), '-', '_');
            auto v = cfg.lookup(section, name);
            if (!v) v = cfg.lookup(section, alt);
            if (!v) continue;
            opt->add_result(*v);
            opt->run_callback();
            break;
        }
    }
}

void emit(const Output& result, const Settings& s, std::ostream& os, bool data_precision) {
    if (s.format == "json") {
        json doc = result.document;
        for (const auto& [name, table] : result.tables) {
            const std::string key = name.empty() ? "data" : name;
            if (!doc.contains(key)) doc[key] = to_records(table);
        }
        os << doc.dump(2) << '\n';
        return;
    }
    bool first = true;
    for (const auto& [name, table] : result.tables) {
        if (!first) os << '\n';
        first = false;
        if (!name.empty()) os << "# " << name << '\n';
        write_delimited(os, table, ',', data_precision ? 8 : 4);
    }
}

void add_input_options(CLI::App* sub, Settings& s) {
    sub->add_option("--input,-i", s.input, "Delimited file with a header row");
    sub->add_option("--input-format", s.input_format, "price or return")->check(CLI::IsMember({"price", "return"}));
    sub->add_option("--column", s.column, "Value column: header name or zero-based index");
    sub->add_option("--date-column", s.date_column, "Date column: name, index, or 'none'");
    sub->add_option("--delimiter", s.delimiter, "Field delimiter (single character or 'tab')");
}

void add_model_options(CLI::App* sub, Settings& s) {
    sub->add_option("--nu", s.nu, "Student-t degrees of freedom (held fixed)");
    sub->add_option("--max-iterations", s.max_iterations, "Nelder-Mead iterations per start");
    sub->add_option("--model", s.model_in, "Load a fitted model instead of fitting");
}

void add_tail_options(CLI::App* sub, Settings& s) {
    sub->add_option("--tail-method", s.tail_method, "fraction1, fraction5 or huisman")
        ->check(CLI::IsMember({"fraction1", "fraction5", "huisman"}));
    sub->add_option("--kappa", s.kappa, "Regression window for the huisman method");
}

void add_true_params(CLI::App* sub, Settings& s) {
    sub->add_option("--phi", s.phi, "AR(1) coefficient");
    sub->add_option("--alpha0", s.alpha0, "GARCH constant");
    sub->add_option("--alpha1", s.alpha1, "ARCH coefficient");
    sub->add_option("--beta1", s.beta1, "GARCH coefficient");
    sub->add_option("--nu", s.nu, "Student-t degrees of freedom");
    sub->add_option("--convention", s.convention, "std-t or raw-t")->check(CLI::IsMember({"std-t", "raw-t"}));
    sub->add_option("--n", s.n, "Observations per path");
    sub->add_option("--burn-in", s.burn_in, "Discarded initial draws");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Conditional EVT risk estimation with AR(1)-GARCH(1,1) filtering", "condevt"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config,-c", s.config_path, "Settings file ([section] and key = value lines)");
    app.add_option("--seed", s.seed, "Random seed");
    app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"table", "json"}));
    app.add_option("--output,-o", s.output, "Write the report to a file instead of stdout");

    auto* fit_cmd = app.add_subcommand("fit", "Fit the AR(1)-GARCH(1,1)-t model and print diagnostics");
    add_input_options(fit_cmd, s);
    add_model_options(fit_cmd, s);
    fit_cmd->add_option("--model-out", s.model_out, "Persist the fitted model as JSON");
    fit_cmd->add_option("--lags", s.lags, "Ljung-Box lags");

    auto* filter_cmd = app.add_subcommand("filter", "Conditional means, volatilities and standardized residuals");
    add_input_options(filter_cmd, s);
    add_model_options(filter_cmd, s);
    filter_cmd->add_option("--qq", s.qq_out, "Write normal QQ-plot data of the residuals");

    auto* tail_cmd = app.add_subcommand("tail", "Downside tail-index estimates of the filtered residuals");
    add_input_options(tail_cmd, s);
    add_model_options(tail_cmd, s);
    tail_cmd->add_option("--kappa", s.kappa, "Regression window for the huisman method");
    tail_cmd->add_option("--curve", s.curve_out, "Write the Hill curve m = 1..kappa");

    auto* risk_cmd = app.add_subcommand("risk", "Conditional probability and quantile estimates per horizon");
    add_input_options(risk_cmd, s);
    add_model_options(risk_cmd, s);
    add_tail_options(risk_cmd, s);
    risk_cmd->add_option("--horizons", s.horizons, "Horizons in periods")->delimiter(',');
    risk_cmd->add_option("--levels", s.levels, "Quantile confidence levels in (0, 1)")->delimiter(',');
    risk_cmd->add_option("--thresholds", s.thresholds, "Loss thresholds in percent")->delimiter(',');
    risk_cmd->add_flag("--no-benchmark", s.no_benchmark, "Skip the conditional Gaussian benchmark");
    risk_cmd->add_flag("--strict", s.strict, "Refuse estimates inside the empirical range");

    auto* sim_cmd = app.add_subcommand("simulate", "Simulate an AR(1)-GARCH(1,1)-t return path");
    add_true_params(sim_cmd, s);
    sim_cmd->add_option("--start-date", s.start_date, "Label rows with business days from this date");

    auto* study_cmd = app.add_subcommand("study", "Monte Carlo study of the scaling procedure");
    add_true_params(study_cmd, s);
    add_tail_options(study_cmd, s);
    study_cmd->add_option("--replications", s.replications, "Number of simulated paths");
    study_cmd->add_option("--horizons", s.horizons, "Horizons in periods")->delimiter(',');
    study_cmd->add_option("--levels", s.levels, "Quantile confidence levels in (0, 1)")->delimiter(',');
    study_cmd->add_option("--thresholds", s.thresholds, "Loss thresholds in percent")->delimiter(',');
    study_cmd->add_option("--oracle-n", s.oracle_n, "Length of the long path for theoretical values (0 = off)");
    study_cmd->add_option("--threads", s.threads, "Worker threads (0 = all cores)");
    study_cmd->add_option("--max-iterations", s.max_iterations, "Nelder-Mead iterations per start");
    study_cmd->add_flag("--quick", s.quick, "Two replications of 500 observations");
    study_cmd->add_flag("--true-params", s.true_params, "Filter with the true parameters instead of refitting");

    auto* bt_cmd = app.add_subcommand("backtest", "Count h-block violations of the conditional quantiles");
    add_input_options(bt_cmd, s);
    add_model_options(bt_cmd, s);
    add_tail_options(bt_cmd, s);
    bt_cmd->add_option("--horizons", s.horizons, "Horizons in periods")->delimiter(',');
    bt_cmd->add_option("--levels", s.levels, "Quantile confidence levels in (0, 1)")->delimiter(',');
    bt_cmd->add_option("--quantile", s.quantile, "Fixed loss threshold instead of the conditional model");
    bt_cmd->add_option("--block", s.h, "Block length for --quantile")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!s.config_path.empty()) {
            const ConfigFile cfg = ConfigFile::load(s.config_path);
            apply_config(app, cfg, "");
            apply_config(*sub, cfg, sub->get_name());
        }
        const std::string name = sub->get_name();
        Output result;
        if (name == "fit") {
            result = cmd_fit(s, err);
        } else if (name == "filter") {
            result = cmd_filter(s, err);
        } else if (name == "tail") {
            result = cmd_tail(s, err);
        } else if (name == "risk") {
            result = cmd_risk(s, err);
        } else if (name == "simulate") {
            result = cmd_simulate(s, err);
        } else if (name == "study") {
            result = cmd_study(s, err);
        } else {
            result = cmd_backtest(s, err);
        }
        const bool data = name == "simulate" || name == "filter";
        if (s.output.empty()) {
            emit(result, s, out, data);
        } else {
            std::ofstream f(s.output);
            if (!f) throw InputError("cannot write '" + s.output + "'");
            emit(result, s, f, data);
        }
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const FitFailure& e) {
        err << "error: " << e.what() << '\n';
        return kFitFailure;
    } catch (const ScalingInapplicable& e) {
        err << "error: " << e.what() << '\n';
        return kScalingInapplicable;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace condevt::cli
