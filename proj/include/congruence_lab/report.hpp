#pragma once

/// Tabular reports written as CSV (with a leading '#' description line) or as
/// a JSON document {"description": ..., "rows": [{column: value}, ...]}.
/// Doubles are printed with 17 significant digits in CSV so both forms carry
/// the same values.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace congruence_lab {

using Field = std::variant<std::monostate, std::int64_t, std::uint64_t, double, bool, std::string>;

struct Table {
    std::string description;
    std::vector<std::string> columns;
    std::vector<std::vector<Field>> rows;

    void add(std::vector<Field> row) {
        if (row.size() != columns.size()) throw std::logic_error("report: row width does not match the header");
        rows.push_back(std::move(row));
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_field(const Field& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return csv_escape(v); }
    };
    return std::visit(Visitor{}, c);
}

inline nlohmann::json json_field(const Field& c) {
    struct Visitor {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(std::int64_t v) const { return v; }
        nlohmann::json operator()(std::uint64_t v) const { return v; }
        nlohmann::json operator()(double v) const { return v; }
        nlohmann::json operator()(bool v) const { return v; }
        nlohmann::json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Table& t) {
    if (!t.description.empty()) os << "# " << t.description << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_field(row[i]);
        os << "\n";
    }
}

inline nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json doc;
    doc["description"] = t.description;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = detail::json_field(row[i]);
        doc["rows"].push_back(std::move(obj));
    }
    return doc;
}

inline void write_json(std::ostream& os, const Table& t) { os << to_json(t).dump(2) << "\n"; }

/// Splits CSV text (as written by write_csv) into description, header and rows of raw fields.
struct ParsedCsv {
    std::string description;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv out;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0 && !header) {
            out.description = line.substr(2);
            continue;
        }
        if (!header) {
            out.columns = split_csv_line(line);
            header = true;
        } else {
            out.rows.push_back(split_csv_line(line));
        }
    }
    return out;
}

}  // namespace congruence_lab
