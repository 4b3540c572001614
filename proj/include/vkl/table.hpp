#pragma once

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vkl/basis.hpp"
#include "vkl/errors.hpp"
#include "vkl/grid.hpp"

namespace vkl {

/// Experiment output: a metadata record plus typed rows.  The CSV form is
/// `# vkl-meta: {json}`, a header line, then data rows with doubles at 17
/// significant digits, so a dump parses back losslessly.
struct Table {
    using Cell = std::variant<index_t, double, std::string>;

    nlohmann::json meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        require(row.size() == columns.size(), errc::invalid_config,
                "row width does not match the column count");
        rows.push_back(std::move(row));
    }
};

namespace detail {

inline std::string cell_text(const Table::Cell& c) {
    if (std::holds_alternative<index_t>(c)) return std::to_string(std::get<index_t>(c));
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline Table::Cell parse_cell(const std::string& text) {
    if (!text.empty()) {
        bool integral = true;
        for (std::size_t i = 0; i < text.size(); ++i) {
            char ch = text[i];
            if (i == 0 && (ch == '-' || ch == '+')) continue;
            if (!std::isdigit(static_cast<unsigned char>(ch))) {
                integral = false;
                break;
            }
        }
        if (integral && text != "-" && text != "+") {
            errno = 0;
            char* end = nullptr;
            long long v = std::strtoll(text.c_str(), &end, 10);
            if (errno == 0 && end == text.c_str() + text.size()) return static_cast<index_t>(v);
        }
        char* end = nullptr;
        double d = std::strtod(text.c_str(), &end);
        if (end == text.c_str() + text.size()) return d;
    }
    return text;
}

}  // namespace detail

inline std::string to_csv(const Table& table) {
    std::ostringstream os;
    os << "# vkl-meta: " << table.meta.dump() << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << table.columns[c];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << detail::cell_text(row[c]);
        os << '\n';
    }
    return os.str();
}

inline Table table_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), errc::invalid_config, "empty table");
    const std::string prefix = "# vkl-meta: ";
    require(line.rfind(prefix, 0) == 0, errc::invalid_config, "missing vkl-meta header");
    Table table;
    table.meta = nlohmann::json::parse(line.substr(prefix.size()));
    require(static_cast<bool>(std::getline(is, line)), errc::invalid_config, "missing column header");
    table.columns = detail::split_csv_line(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = detail::split_csv_line(line);
        require(fields.size() == table.columns.size(), errc::invalid_config,
                "row width does not match the column count");
        std::vector<Table::Cell> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) row.push_back(detail::parse_cell(f));
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::string to_json_text(const Table& table) {
    nlohmann::json j;
    j["vkl-meta"] = table.meta;
    j["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& cell : row) {
            if (std::holds_alternative<index_t>(cell))
                r.push_back(std::get<index_t>(cell));
            else if (std::holds_alternative<double>(cell))
                r.push_back(std::get<double>(cell));
            else
                r.push_back(std::get<std::string>(cell));
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

}  // namespace vkl
