#include "condevt/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "condevt/errors.hpp"
#include "condevt/normal.hpp"

namespace condevt {

namespace {

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r\n");
    s = s.substr(first, last - first + 1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delim, start);
        out.push_back(trim(std::string_view(line).substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_double(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
    return v;
}

// Accepts YYYY-MM-DD, YYYY/MM/DD and YYYYMMDD; returns a sortable key.
std::optional<long> date_key(const std::string& label) {
    std::string digits;
    for (char c : label) {
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
        } else if (c != '-' && c != '/') {
            return std::nullopt;
        }
    }
    if (digits.size() != 8) return std::nullopt;
    long key = std::stol(digits);
    long month = (key / 100) % 100;
    long day = key % 100;
    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    return key;
}

std::size_t resolve_column(const std::vector<std::string>& header, const std::optional<std::string>& name,
                           std::size_t index, const char* what) {
    if (name) {
        auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) {
            throw InputError(std::string("no ") + what + " column named '" + *name + "' in header");
        }
        return static_cast<std::size_t>(it - header.begin());
    }
    if (index >= header.size()) {
        throw InputError(std::string(what) + " column index " + std::to_string(index) + " out of range");
    }
    return index;
}

void check_dates(const std::vector<Observation>& obs) {
    std::unordered_set<std::string> seen;
    for (const auto& o : obs) {
        if (o.date.empty()) continue;
        if (!seen.insert(o.date).second) throw InputError("duplicate date label '" + o.date + "'");
    }
    std::vector<long> keys;
    keys.reserve(obs.size());
    for (const auto& o : obs) {
        auto k = date_key(o.date);
        if (!k) return;  // unparseable labels: ordering is taken as given
        keys.push_back(*k);
    }
    for (std::size_t i = 1; i < keys.size(); ++i) {
        if (keys[i] <= keys[i - 1]) {
            throw InputError("dates not strictly increasing at '" + obs[i].date + "'");
        }
    }
}

}  // namespace

ReturnSeries::ReturnSeries(std::string name, std::vector<Observation> observations) : name_(std::move(name)) {
    check_dates(observations);
    values_.reserve(observations.size());
    dates_.reserve(observations.size());
    for (auto& o : observations) {
        if (!std::isfinite(o.value)) throw InputError("non-finite return in series '" + name_ + "'");
        values_.push_back(o.value);
        dates_.push_back(std::move(o.date));
    }
}

ReturnSeries::ReturnSeries(std::string name, std::vector<double> values)
    : name_(std::move(name)), values_(std::move(values)), dates_(values_.size()) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw InputError("non-finite return in series '" + name_ + "'");
    }
}

ReturnSeries ReturnSeries::scaled(double factor) const {
    ReturnSeries out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
}

std::vector<double> log_returns(std::span<const double> prices) {
    for (double p : prices) {
        if (!(p > 0.0) || !std::isfinite(p)) throw InputError("non-positive price");
    }
    std::vector<double> r;
    if (prices.size() < 2) return r;
    r.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) r.push_back(100.0 * std::log(prices[i] / prices[i - 1]));
    return r;
}

std::vector<double> compound_prices(double first_price, std::span<const double> returns) {
    std::vector<double> p;
    p.reserve(returns.size() + 1);
    p.push_back(first_price);
    double log_level = std::log(first_price);
    for (double r : returns) {
        log_level += r / 100.0;
        p.push_back(std::exp(log_level));
    }
    return p;
}

ReturnSeries load_series(const std::filesystem::path& path, SeriesFormat format, const ColumnSpec& columns) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input file '" + path.string() + "'");
    const auto header = split(line, columns.delimiter);
    const std::size_t value_col = resolve_column(header, columns.value_name, columns.value_index, "value");
    std::optional<std::size_t> date_col;
    if (columns.date_name || columns.date_index) {
        date_col = resolve_column(header, columns.date_name, columns.date_index.value_or(0), "date");
    }

    std::vector<std::string> labels;
    std::vector<double> values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split(line, columns.delimiter);
        const std::size_t needed = std::max(value_col, date_col.value_or(0)) + 1;
        if (cells.size() < needed) {
            throw InputError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells");
        }
        auto v = parse_double(cells[value_col]);
        if (!v) {
            throw InputError("non-numeric cell '" + cells[value_col] + "' at row " + std::to_string(row));
        }
        if (format == SeriesFormat::price && !(*v > 0.0)) {
            throw InputError("non-positive price at row " + std::to_string(row));
        }
        values.push_back(*v);
        labels.push_back(date_col ? cells[*date_col] : std::string{});
    }
    if (values.size() < 2) throw InputError("fewer than 2 data rows in '" + path.string() + "'");

    std::vector<Observation> obs;
    if (format == SeriesFormat::price) {
        const auto r = log_returns(values);
        obs.reserve(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) obs.push_back({labels[i + 1], r[i]});
    } else {
        obs.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) obs.push_back({labels[i], values[i]});
    }
    return ReturnSeries(path.stem().string(), std::move(obs));
}

SummaryStats summary_stats(std::span<const double> x) {
    if (x.size() < 4) throw std::invalid_argument("summary_stats needs at least 4 observations");
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw DegenerateSample("summary_stats: constant series has no skewness or kurtosis");
    SummaryStats s;
    s.n = x.size();
    s.mean = mean;
    s.sd = std::sqrt(m2);
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    return s;
}

std::vector<QQPoint> qq_data(std::span<const double> z) {
    if (z.size() < 2) throw std::invalid_argument("qq_data needs at least 2 observations");
    std::vector<double> sorted(z.begin(), z.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<QQPoint> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out.push_back({normal_quantile((static_cast<double>(i) + 0.5) / n), sorted[i]});
    }
    return out;
}

}  // namespace condevt
