#include "condevt/serialize.hpp"

#include <stdexcept>

namespace condevt {

using nlohmann::json;

std::string to_string(Innovation v) { return v == Innovation::normal ? "normal" : "student_t"; }
std::string to_string(TConvention v) { return v == TConvention::raw ? "raw-t" : "std-t"; }
std::string to_string(TailMethod v) { return v == TailMethod::huisman ? "huisman" : "fixed-fraction"; }
std::string to_string(TailSide v) { return v == TailSide::upper ? "upper" : "lower"; }
std::string to_string(RiskKind v) { return v == RiskKind::quantile ? "quantile" : "probability"; }
std::string to_string(RiskMethod v) { return v == RiskMethod::gaussian ? "gaussian" : "evt"; }

Innovation parse_innovation(const std::string& s) {
    if (s == "student_t" || s == "t") return Innovation::student_t;
    if (s == "normal" || s == "gaussian") return Innovation::normal;
    throw std::invalid_argument("unknown innovation law '" + s + "'");
}

TConvention parse_convention(const std::string& s) {
    if (s == "std-t" || s == "standardized") return TConvention::standardized;
    if (s == "raw-t" || s == "raw") return TConvention::raw;
    throw std::invalid_argument("unknown t convention '" + s + "' (expected std-t or raw-t)");
}

void to_json(json& j, const GarchParams& p) {
    j = json{{"phi", p.phi},     {"alpha0", p.alpha0}, {"alpha1", p.alpha1},
             {"beta1", p.beta1}, {"nu", p.nu},         {"innovation", to_string(p.innovation)}};
}

void from_json(const json& j, GarchParams& p) {
    j.at("phi").get_to(p.phi);
    j.at("alpha0").get_to(p.alpha0);
    j.at("alpha1").get_to(p.alpha1);
    j.at("beta1").get_to(p.beta1);
    p.nu = j.value("nu", 4.0);
    p.innovation = parse_innovation(j.value("innovation", std::string("student_t")));
}

void to_json(json& j, const FitResult& f) {
    j = json{{"params", f.params},         {"loglik", f.loglik},     {"converged", f.converged},
             {"iterations", f.iterations}, {"boundary", f.boundary}, {"warnings", f.warnings}};
    if (f.robust_se) {
        const auto& se = *f.robust_se;
        j["robust_se"] = json{{"phi", se[0]}, {"alpha0", se[1]}, {"alpha1", se[2]}, {"beta1", se[3]}};
    } else {
        j["robust_se"] = nullptr;
    }
}

void from_json(const json& j, FitResult& f) {
    j.at("params").get_to(f.params);
    f.loglik = j.value("loglik", 0.0);
    f.converged = j.value("converged", false);
    f.iterations = j.value("iterations", 0);
    f.boundary = j.value("boundary", false);
    f.warnings = j.value("warnings", std::vector<std::string>{});
    if (j.contains("robust_se") && !j["robust_se"].is_null()) {
        const auto& s = j["robust_se"];
        f.robust_se = GarchVector{s.at("phi").get<double>(), s.at("alpha0").get<double>(),
                                  s.at("alpha1").get<double>(), s.at("beta1").get<double>()};
    } else {
        f.robust_se.reset();
    }
}

void to_json(json& j, const Forecast& f) { j = json{{"mu_next", f.mu_next}, {"sigma_next", f.sigma_next}}; }

void to_json(json& j, const LjungBoxResult& r) {
    j = json{{"statistic", r.statistic}, {"p_value", r.p_value}, {"lags", r.lags}};
}

void to_json(json& j, const SummaryStats& s) {
    j = json{{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"skewness", s.skewness}, {"kurtosis", s.kurtosis}};
}

void to_json(json& j, const TailEstimate& t) {
    j = json{{"gamma", t.gamma}, {"alpha", t.alpha}, {"m", t.m},
             {"stderr", t.standard_error}, {"method", to_string(t.method)}};
}

void to_json(json& j, const RiskEstimate& r) {
    j = json{{"value", r.value},           {"kind", to_string(r.kind)},   {"horizon", r.horizon},
             {"method", to_string(r.method)}, {"tail_side", to_string(r.tail_side)},
             {"scaling", r.scaling},       {"capped", r.capped},          {"forecast", r.forecast}};
}

void to_json(json& j, const StudyReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json q = json::array(), p = json::array(), v = json::array();
    for (const auto& c : r.quantiles) {
        q.push_back({{"level", c.level}, {"h", c.h}, {"mean_estimate", c.mean_estimate}, {"oracle", opt(c.oracle)}});
    }
    for (const auto& c : r.probabilities) {
        p.push_back(
            {{"threshold", c.threshold}, {"h", c.h}, {"mean_estimate", c.mean_estimate}, {"oracle", opt(c.oracle)}});
    }
    for (const auto& c : r.violations) {
        v.push_back({{"level", c.level}, {"h", c.h}, {"mean_actual", c.mean_actual}, {"expected", c.expected}});
    }
    j = json{{"quantiles", q},
             {"probabilities", p},
             {"violations", v},
             {"replications_used", r.used},
             {"replications_excluded", r.excluded},
             {"exclusion_reasons", r.exclusion_reasons},
             {"mean_alpha", r.mean_alpha},
             {"mean_m", r.mean_m}};
}

}  // namespace condevt
