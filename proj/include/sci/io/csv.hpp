#pragma once

// CSV schema used by the tools: header row, feature columns x1..xd, label
// column y (predictions add yhat), '.' decimal, UTF-8, no index column.
// Floats are written with 17 significant digits so re-runs are byte-stable.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sci/core.hpp"

namespace sci::io {

/// User-facing input problem (maps to CLI exit code 2).
struct user_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Write content to path via a temporary file in the same directory plus an
/// atomic rename.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw user_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.flush()) throw user_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_number(std::string_view field, const std::string& path, std::size_t line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw user_error(path + ":" + std::to_string(line) + ": not a number: '" +
                         std::string(field) + "'");
    return value;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_numeric_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw user_error("cannot open: " + path.string());
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            table.header = split_csv_line(line);
            if (table.header.empty() || table.header.front().empty())
                throw user_error(path.string() + ":1: missing header row");
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != table.header.size())
            throw user_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_number(f, path.string(), lineno));
        table.rows.push_back(std::move(row));
    }
    if (lineno == 0) throw user_error(path.string() + ":1: empty file");
    return table;
}

inline void expect_feature_header(const std::vector<std::string>& header,
                                  std::size_t feature_count, const std::string& path) {
    for (std::size_t i = 0; i < feature_count; ++i) {
        const std::string expected = "x" + std::to_string(i + 1);
        if (header[i] != expected)
            throw user_error(path + ":1: expected column '" + expected + "', found '" +
                             header[i] + "'");
    }
}

}  // namespace detail

/// Read a training CSV (x1..xd,y) into a dataset.
inline LabeledDataset read_dataset(const std::filesystem::path& path) {
    const auto table = detail::read_numeric_csv(path);
    if (table.header.size() < 2 || table.header.back() != "y")
        throw user_error(path.string() + ":1: expected header x1..xd,y");
    const std::size_t d = table.header.size() - 1;
    detail::expect_feature_header(table.header, d, path.string());
    if (table.rows.empty())
        throw user_error(path.string() + ": no data rows");
    std::vector<double> xs, ys;
    xs.reserve(table.rows.size() * d);
    ys.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        xs.insert(xs.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(d));
        ys.push_back(row.back());
    }
    try {
        return LabeledDataset(static_cast<int>(d), std::move(xs), std::move(ys));
    } catch (const std::invalid_argument& e) {
        throw user_error(path.string() + ": " + e.what());
    }
}

/// Read a query CSV (x1..xd). May contain zero rows.
inline std::pair<int, std::vector<std::vector<double>>> read_queries(
    const std::filesystem::path& path) {
    const auto table = detail::read_numeric_csv(path);
    detail::expect_feature_header(table.header, table.header.size(), path.string());
    return {static_cast<int>(table.header.size()), table.rows};
}

/// Write a numeric table (17-significant-digit floats) atomically.
inline void write_table(const std::filesystem::path& path,
                        const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
    atomic_write_file(path, out.str());
}

}  // namespace sci::io
