#include "condevt/report.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace condevt {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("table row width does not match the header");
    rows.push_back(std::move(row));
}

void write_delimited(std::ostream& os, const Table& table, char delimiter, int precision) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << delimiter;
        os << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << delimiter;
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        std::ostringstream cell;
                        cell << std::fixed << std::setprecision(precision) << v;
                        os << cell.str();
                    } else if constexpr (!std::is_same_v<T, std::monostate>) {
                        os << v;
                    }
                },
                row[i]);
        }
        os << '\n';
    }
}

nlohmann::json to_records(const Table& table) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json rec = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>) {
                        rec[table.columns[i]] = nullptr;
                    } else {
                        rec[table.columns[i]] = v;
                    }
                },
                row[i]);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace condevt
