#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace corrbc {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    std::string to_csv() const;
    std::string to_json() const;
};

// 12 significant digits, '.' decimal, independent of the global locale.
std::string format_number(double x);

}  // namespace corrbc
