#pragma once

#include <json.hpp>
#include <string>

#include "condevt/data_io.hpp"
#include "condevt/garch.hpp"
#include "condevt/ljung_box.hpp"
#include "condevt/mcstudy.hpp"
#include "condevt/risk.hpp"
#include "condevt/tail.hpp"

namespace condevt {

std::string to_string(Innovation v);
std::string to_string(TConvention v);
std::string to_string(TailMethod v);
std::string to_string(TailSide v);
std::string to_string(RiskKind v);
std::string to_string(RiskMethod v);

Innovation parse_innovation(const std::string& s);
TConvention parse_convention(const std::string& s);

void to_json(nlohmann::json& j, const GarchParams& p);
void from_json(const nlohmann::json& j, GarchParams& p);
void to_json(nlohmann::json& j, const FitResult& f);
void from_json(const nlohmann::json& j, FitResult& f);
void to_json(nlohmann::json& j, const Forecast& f);
void to_json(nlohmann::json& j, const LjungBoxResult& r);
void to_json(nlohmann::json& j, const SummaryStats& s);
void to_json(nlohmann::json& j, const TailEstimate& t);
void to_json(nlohmann::json& j, const RiskEstimate& r);
void to_json(nlohmann::json& j, const StudyReport& r);

}  // namespace condevt
