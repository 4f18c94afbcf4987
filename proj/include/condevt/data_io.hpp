#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace condevt {

struct Observation {
    std::string date;  // empty when the input has no date column
    double value = 0.0;
};

/// Ordered return observations in percent units (100 x log return).
class ReturnSeries {
public:
    ReturnSeries() = default;
    ReturnSeries(std::string name, std::vector<Observation> observations);
    /// Undated series; labels are left empty.
    ReturnSeries(std::string name, std::vector<double> values);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<std::string>& dates() const noexcept { return dates_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    /// Same dates and name, every return multiplied by `factor`.
    [[nodiscard]] ReturnSeries scaled(double factor) const;

private:
    std::string name_;
    std::vector<double> values_;
    std::vector<std::string> dates_;
};

enum class SeriesFormat { price, returns };

/// Which columns of a delimited file to read. Columns are selected by header
/// name when given, otherwise by zero-based index.
struct ColumnSpec {
    std::optional<std::string> value_name;
    std::size_t value_index = 1;
    std::optional<std::string> date_name;
    std::optional<std::size_t> date_index = 0;  // nullopt: file has no date column
    char delimiter = ',';
};

/// Reads a delimited text file with a header row. Prices are converted to
/// percent log returns; returns pass through unchanged.
[[nodiscard]] ReturnSeries load_series(const std::filesystem::path& path, SeriesFormat format,
                                       const ColumnSpec& columns = {});

/// 100 * ln(P_t / P_{t-1}). Throws InputError on a non-positive price.
[[nodiscard]] std::vector<double> log_returns(std::span<const double> prices);

/// Inverse of log_returns given the first price.
[[nodiscard]] std::vector<double> compound_prices(double first_price, std::span<const double> returns);

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;        // population (1/n) convention
    double skewness = 0.0;
    double kurtosis = 0.0;  // m4 / m2^2, not excess
};

[[nodiscard]] SummaryStats summary_stats(std::span<const double> x);
[[nodiscard]] inline SummaryStats summary_stats(const ReturnSeries& s) { return summary_stats(s.values()); }

struct QQPoint {
    double theoretical = 0.0;  // standard normal quantile at (i - 0.5)/n
    double empirical = 0.0;    // i-th order statistic
};

[[nodiscard]] std::vector<QQPoint> qq_data(std::span<const double> z);

}  // namespace condevt
