#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fourthmoment/core/errors.hpp"

namespace fourthmoment::csv {

/// Shortest-independent, round-trippable rendering: always 17 significant digits.
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t\r");
        const auto e = f.find_last_not_of(" \t\r");
        f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
    }
    return out;
}

inline double parse_double(const std::string& field, std::size_t line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ParseError("not a number: '" + field + "'", line);
    return v;
}

/// One data row with its 1-based physical line number.
struct Row {
    std::size_t line;
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> comments;  ///< '#' lines, marker stripped
    std::vector<std::string> header;
    std::vector<Row> rows;
};

/// Reads comment lines, one header line and data rows. Blank lines are
/// skipped. An empty stream yields an empty table.
inline Table read(std::istream& in) {
    Table t;
    std::string line;
    std::size_t no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line.front() == '#') {
            t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
            continue;
        }
        auto fields = split(line);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size())
            throw ParseError("expected " + std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()), no);
        t.rows.push_back({no, std::move(fields)});
    }
    return t;
}

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open " + path);
    return read(in);
}

inline void expect_header(const Table& t, const std::vector<std::string>& want, const std::string& what) {
    if (t.header != want) {
        std::string got;
        for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
        throw Error(ErrorKind::input, what + ": unexpected header '" + got + "'");
    }
}

/// Joins already-formatted fields.
inline std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::input, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorKind::input, "write failed for " + path);
}

}  // namespace fourthmoment::csv
