#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rdcscreen/data.hpp"
#include "rdcscreen/error.hpp"

namespace rdcscreen {

/// 17 significant digits, enough to round-trip any double.
[[nodiscard]] inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[nodiscard]] inline std::vector<std::string> split_list(std::string_view s, char sep = ',')
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t end = std::min(s.find(sep, start), s.size());
        const auto item = trim(s.substr(start, end - start));
        if (!item.empty()) {
            out.emplace_back(item);
        }
        start = end + 1;
    }
    return out;
}

[[nodiscard]] inline std::string join_list(const std::vector<std::string>& items, char sep = ',')
{
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) {
            out += sep;
        }
        out += item;
    }
    return out;
}

/// A header plus rows of numeric cells, nothing interpreted yet.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline std::vector<std::string_view> split_fields(std::string_view line, char delim)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = line.find(delim, start);
        fields.push_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return fields;
}

/// Reads a rectangular numeric table with a header row. Non-numeric cells
/// and ragged rows are parse errors; NaN/Inf cells are collected and
/// rejected together.
[[nodiscard]] inline CsvTable read_numeric_table(std::istream& in, const std::string& source, char delim = ',')
{
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            break;
        }
    }
    if (trim(line).empty()) {
        throw ParseError(source + ": empty file, expected a header row");
    }
    for (auto f : split_fields(line, delim)) {
        if (f.size() >= 2 && f.front() == '"' && f.back() == '"') {
            f = f.substr(1, f.size() - 2);
        }
        table.header.emplace_back(f);
    }
    std::set<std::string> seen;
    for (const auto& name : table.header) {
        if (name.empty()) {
            throw ParseError(source + ": empty column name in header");
        }
        if (!seen.insert(name).second) {
            throw ParseError(source + ": duplicate column name '" + name + "'");
        }
    }

    std::vector<std::string> non_finite;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line, delim);
        if (fields.size() != table.header.size()) {
            throw ParseError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size())
                             + " fields, header has " + std::to_string(table.header.size()));
        }
        std::vector<double> row(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto f = fields[c];
            const char* first = f.data();
            const char* last = f.data() + f.size();
            if (first != last && *first == '+') {
                ++first;
            }
            const auto [ptr, ec] = std::from_chars(first, last, row[c]);
            if (f.empty() || ec != std::errc() || ptr != last) {
                throw ParseError(source + ": non-numeric value '" + std::string(f) + "' at line "
                                 + std::to_string(line_no) + ", column '" + table.header[c] + "'");
            }
            if (!std::isfinite(row[c])) {
                non_finite.push_back("(line " + std::to_string(line_no) + ", column '" + table.header[c] + "')");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (!non_finite.empty()) {
        std::string msg = source + ": non-finite values at";
        for (std::size_t i = 0; i < non_finite.size() && i < 20; ++i) {
            msg += " " + non_finite[i];
        }
        if (non_finite.size() > 20) {
            msg += " and " + std::to_string(non_finite.size() - 20) + " more";
        }
        throw DataError(msg);
    }
    return table;
}

[[nodiscard]] inline CsvTable read_numeric_table(const std::filesystem::path& path, char delim = ',')
{
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot open input file '" + path.string() + "'");
    }
    return read_numeric_table(in, path.string(), delim);
}

/// Which columns hold the response: named columns of the main table, or
/// (when `file` is set) the named columns, or all columns, of another file.
struct ResponseSpec {
    std::vector<std::string> columns;
    std::optional<std::filesystem::path> file;
};

namespace detail {

inline std::size_t column_index(const CsvTable& t, const std::string& name, const std::string& source)
{
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) {
        std::string available;
        for (const auto& h : t.header) {
            available += (available.empty() ? "" : ", ") + h;
        }
        throw ParameterError(source + ": no column named '" + name + "' (available: " + available + ")");
    }
    return static_cast<std::size_t>(it - t.header.begin());
}

} // namespace detail

[[nodiscard]] inline DataMatrix load_csv(const std::filesystem::path& path, const ResponseSpec& response,
                                         char delim = ',')
{
    const CsvTable main = read_numeric_table(path, delim);
    const std::size_t n = main.rows.size();

    std::vector<std::size_t> response_cols;
    std::optional<CsvTable> side;
    if (response.file) {
        side = read_numeric_table(*response.file, delim);
        if (side->rows.size() != n) {
            throw ParseError(response.file->string() + ": has " + std::to_string(side->rows.size())
                             + " rows, input has " + std::to_string(n));
        }
        if (response.columns.empty()) {
            for (std::size_t c = 0; c < side->header.size(); ++c) {
                response_cols.push_back(c);
            }
        } else {
            for (const auto& name : response.columns) {
                response_cols.push_back(detail::column_index(*side, name, response.file->string()));
            }
        }
    } else {
        if (response.columns.empty()) {
            throw ParameterError("no response column given");
        }
        for (const auto& name : response.columns) {
            response_cols.push_back(detail::column_index(main, name, path.string()));
        }
    }
    if (std::set<std::size_t>(response_cols.begin(), response_cols.end()).size() != response_cols.size()) {
        throw ParameterError("response column listed twice");
    }

    std::vector<std::size_t> predictor_cols;
    for (std::size_t c = 0; c < main.header.size(); ++c) {
        if (side || std::find(response_cols.begin(), response_cols.end(), c) == response_cols.end()) {
            predictor_cols.push_back(c);
        }
    }
    const CsvTable& rt = side ? *side : main;

    DataMatrix m;
    m.n = n;
    m.p = predictor_cols.size();
    m.q = response_cols.size();
    m.predictors.resize(m.n * m.p);
    m.response.resize(m.n * m.q);
    for (std::size_t c : predictor_cols) {
        m.predictor_names.push_back(main.header[c]);
    }
    for (std::size_t c : response_cols) {
        m.response_names.push_back(rt.header[c]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m.p; ++j) {
            m.x(i, j) = main.rows[i][predictor_cols[j]];
        }
        for (std::size_t k = 0; k < m.q; ++k) {
            m.y(i, k) = rt.rows[i][response_cols[k]];
        }
    }
    return m;
}

/// Predictor columns followed by response columns.
inline void write_csv(std::ostream& out, const DataMatrix& m, char delim = ',')
{
    bool first = true;
    for (const auto& name : m.predictor_names) {
        out << (first ? "" : std::string(1, delim)) << name;
        first = false;
    }
    for (const auto& name : m.response_names) {
        out << (first ? "" : std::string(1, delim)) << name;
        first = false;
    }
    out << '\n';
    for (std::size_t i = 0; i < m.n; ++i) {
        first = true;
        for (std::size_t j = 0; j < m.p; ++j) {
            out << (first ? "" : std::string(1, delim)) << format_double(m.x(i, j));
            first = false;
        }
        for (std::size_t k = 0; k < m.q; ++k) {
            out << (first ? "" : std::string(1, delim)) << format_double(m.y(i, k));
            first = false;
        }
        out << '\n';
    }
}

} // namespace rdcscreen
