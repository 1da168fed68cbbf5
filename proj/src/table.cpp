#include "corrbc/table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace corrbc {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("Table::add_row: column count mismatch");
    }
    rows.push_back(std::move(row));
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0.0) {
        return "0";  // also folds -0
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

namespace {

std::string render(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) {
        return std::to_string(*i);
    }
    if (const auto* d = std::get_if<double>(&c)) {
        return format_number(*d);
    }
    return std::get<std::string>(c);
}

}  // namespace

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += (i ? "," : "") + columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += render(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json() const {
    nlohmann::ordered_json doc;
    doc["columns"] = columns;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            if (const auto* v = std::get_if<std::int64_t>(&c)) {
                obj[columns[i]] = *v;
            } else if (const auto* d = std::get_if<double>(&c)) {
                // Same 12-digit rounding as the CSV so both formats agree.
                double rounded = *d;
                if (std::isfinite(*d)) {
                    const std::string text = format_number(*d);
                    std::from_chars(text.data(), text.data() + text.size(), rounded);
                }
                if (std::isfinite(rounded)) {
                    obj[columns[i]] = rounded;
                } else {
                    obj[columns[i]] = format_number(*d);
                }
            } else {
                obj[columns[i]] = std::get<std::string>(c);
            }
        }
        arr.push_back(std::move(obj));
    }
    doc["rows"] = std::move(arr);
    return doc.dump(2) + "\n";
}

}  // namespace corrbc
