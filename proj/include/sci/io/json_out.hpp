#pragma once

// JSON output with insertion-ordered keys and floats rendered at 17
// significant digits, so identical runs serialize byte-identically. Parsing
// is nlohmann's; only the dump is custom.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sci/io/csv.hpp"

namespace sci::io {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline void dump_json(const ordered_json& v, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (v.type()) {
        case ordered_json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += ordered_json(key).dump();
                out += ": ";
                dump_json(value, out, indent, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                dump_json(item, out, indent, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case ordered_json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace detail

inline std::string dump_json(const ordered_json& v, int indent = 2) {
    std::string out;
    detail::dump_json(v, out, indent, 0);
    out += "\n";
    return out;
}

inline void write_json(const std::filesystem::path& path, const ordered_json& v) {
    atomic_write_file(path, dump_json(v));
}

}  // namespace sci::io
