#pragma once

// Minimal TOML reader for flat experiment configs: comments, [table] and
// [table.sub] headers, and key = value lines with strings, integers, floats,
// booleans, and one-level arrays of those. Enough for every config this
// project reads; not a general TOML implementation.

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sci/io/csv.hpp"

namespace sci::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Strip a trailing comment that is not inside a string literal.
inline std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

inline nlohmann::ordered_json parse_toml_scalar(std::string_view raw, std::size_t lineno);

inline nlohmann::ordered_json parse_toml_value(std::string_view raw, std::size_t lineno) {
    raw = trim(raw);
    if (raw.empty()) throw user_error("toml:" + std::to_string(lineno) + ": missing value");
    if (raw.front() == '[') {
        if (raw.back() != ']')
            throw user_error("toml:" + std::to_string(lineno) + ": unterminated array");
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        std::string_view body = raw.substr(1, raw.size() - 2);
        std::size_t start = 0;
        bool in_string = false;
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i < body.size() && body[i] == '"') in_string = !in_string;
            if (i == body.size() || (body[i] == ',' && !in_string)) {
                const std::string_view item = trim(body.substr(start, i - start));
                if (!item.empty()) arr.push_back(parse_toml_scalar(item, lineno));
                start = i + 1;
            }
        }
        return arr;
    }
    return parse_toml_scalar(raw, lineno);
}

inline nlohmann::ordered_json parse_toml_scalar(std::string_view raw, std::size_t lineno) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
        return std::string(raw.substr(1, raw.size() - 2));
    if (raw == "true") return true;
    if (raw == "false") return false;
    const std::string text(raw);
    if (raw.find_first_of(".eE") == std::string_view::npos ||
        (raw.rfind("0x", 0) == 0)) {
        long long iv = 0;
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), iv);
        if (ec == std::errc() && p == text.data() + text.size()) {
            if (iv >= 0) return static_cast<std::uint64_t>(iv);
            return iv;
        }
    }
    double dv = 0.0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), dv);
    if (ec == std::errc() && p == text.data() + text.size()) return dv;
    throw user_error("toml:" + std::to_string(lineno) + ": cannot parse value '" + text + "'");
}

}  // namespace detail

/// Parse the supported TOML subset into a JSON object.
inline nlohmann::ordered_json parse_toml(const std::string& text) {
    nlohmann::ordered_json root = nlohmann::ordered_json::object();
    nlohmann::ordered_json* table = &root;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (eol == std::string::npos ? text.size() : eol) - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++lineno;
        line = detail::trim(detail::strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw user_error("toml:" + std::to_string(lineno) + ": bad table header");
            std::string_view name = detail::trim(line.substr(1, line.size() - 2));
            table = &root;
            std::size_t start = 0;
            for (std::size_t i = 0; i <= name.size(); ++i) {
                if (i == name.size() || name[i] == '.') {
                    const std::string part(detail::trim(name.substr(start, i - start)));
                    if (part.empty())
                        throw user_error("toml:" + std::to_string(lineno) + ": bad table name");
                    table = &(*table)[part];
                    if (!table->is_object() && !table->is_null())
                        throw user_error("toml:" + std::to_string(lineno) +
                                         ": table redefines a value");
                    start = i + 1;
                }
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw user_error("toml:" + std::to_string(lineno) + ": expected key = value");
        const std::string key(detail::trim(line.substr(0, eq)));
        if (key.empty())
            throw user_error("toml:" + std::to_string(lineno) + ": empty key");
        (*table)[key] = detail::parse_toml_value(line.substr(eq + 1), lineno);
    }
    return root;
}

}  // namespace sci::io
