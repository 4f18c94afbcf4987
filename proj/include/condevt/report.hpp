#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace condevt {

/// Rectangular result table, emitted either as delimited text or as an
/// array of JSON records keyed by column name.
struct Table {
    using Cell = std::variant<std::monostate, std::string, double, long long>;

    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// Doubles are written with `precision` decimals; empty cells stay empty.
void write_delimited(std::ostream& os, const Table& table, char delimiter = ',', int precision = 4);

/// Full-precision records; empty cells become null.
[[nodiscard]] nlohmann::json to_records(const Table& table);

}  // namespace condevt
