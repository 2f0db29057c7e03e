#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "creditlab/errors.hpp"

namespace creditlab {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each row has header.size() fields
    // physical line number of data row i (1-based, header = line 1)
    std::size_t line_of(std::size_t row) const { return row + 2; }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ParseError(line_no, "unterminated quote");
    fields.push_back(field);
    return fields;
}

}  // namespace detail

// Reads a comma-separated table: UTF-8, header row required, '.' decimal
// separator. Rows must have exactly as many fields as the header.
inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            table.header = detail::split_csv_line(line, line_no);
            continue;
        }
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line, line_no);
        if (fields.size() != table.header.size())
            throw ParseError(line_no, "expected " + std::to_string(table.header.size()) +
                                          " fields, got " + std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    if (line_no == 0) throw ParseError(1, "empty input, header row required");
    return table;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

}  // namespace creditlab
