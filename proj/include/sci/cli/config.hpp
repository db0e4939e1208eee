#pragma once

// Declarative experiment configs: JSON or TOML in, schema-checked (unknown
// keys rejected), defaults filled, and the fully resolved config embedded in
// every output for reproducible re-runs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sci/core.hpp"
#include "sci/io/csv.hpp"
#include "sci/io/json_out.hpp"
#include "sci/io/toml_lite.hpp"

namespace sci::cli {

using io::ordered_json;
using io::user_error;

/// Load a config file, dispatching on syntax: JSON when the first
/// non-whitespace byte is '{', the TOML subset otherwise. A previously
/// emitted output file ({config, results, version}) yields its embedded
/// config, so outputs can be re-run directly.
inline ordered_json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw user_error("cannot open config: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    ordered_json config;
    if (i < text.size() && text[i] == '{') {
        try {
            config = ordered_json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw user_error(path.string() + ": " + e.what());
        }
    } else {
        config = io::parse_toml(text);
    }
    if (config.contains("config") && config.contains("results") && config.contains("version"))
        return config["config"];
    return config;
}

/// Typed, schema-checking view over a config object. Every key must be read
/// (or declared) exactly through this interface; leftovers are rejected.
class ConfigView {
public:
    explicit ConfigView(ordered_json config, std::string context)
        : config_(std::move(config)), context_(std::move(context)) {
        if (!config_.is_object())
            throw user_error(context_ + ": config must be an object");
        // Embedded configs carry the subcommand name; accept it when it
        // matches the command being run.
        mark("command");
        if (config_.contains("command")) {
            const auto& v = config_["command"];
            if (!v.is_string() || v.get<std::string>() != context_)
                throw user_error(context_ + ": config is for command '" +
                                 (v.is_string() ? v.get<std::string>() : v.dump()) + "'");
        }
    }

    double number(const std::string& key, double fallback) {
        mark(key);
        if (!config_.contains(key)) return fallback;
        const auto& v = config_[key];
        if (!v.is_number()) throw user_error(context_ + ": '" + key + "' must be a number");
        return v.get<double>();
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        mark(key);
        if (!config_.contains(key)) return fallback;
        const auto& v = config_[key];
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw user_error(context_ + ": '" + key + "' must be an integer");
        return v.get<std::int64_t>();
    }

    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        mark(key);
        if (!config_.contains(key)) return fallback;
        const auto& v = config_[key];
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw user_error(context_ + ": '" + key + "' must be an integer seed");
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        mark(key);
        if (!config_.contains(key)) return fallback;
        const auto& v = config_[key];
        if (!v.is_string()) throw user_error(context_ + ": '" + key + "' must be a string");
        return v.get<std::string>();
    }

    /// "auto" or a positive integer; nullopt encodes "auto". A missing key
    /// takes `fallback` (which may itself be nullopt, meaning auto).
    std::optional<std::int64_t> k_or_auto(const std::string& key,
                                          std::optional<std::int64_t> fallback) {
        mark(key);
        if (!config_.contains(key)) return fallback;
        const auto& v = config_[key];
        if (v.is_string()) {
            if (v.get<std::string>() == "auto") return std::nullopt;
            throw user_error(context_ + ": '" + key + "' must be \"auto\" or an integer");
        }
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw user_error(context_ + ": '" + key + "' must be \"auto\" or an integer");
        return v.get<std::int64_t>();
    }

    /// "log" or a positive delta for power weights.
    WeightScheme weights(const std::string& key, const WeightScheme& fallback) {
        mark(key);
        if (!config_.contains(key)) return fallback;
        const auto& v = config_[key];
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "log" || s == "logarithmic") return WeightScheme::logarithmic();
            throw user_error(context_ + ": '" + key + "' must be \"log\" or a positive delta");
        }
        if (!v.is_number())
            throw user_error(context_ + ": '" + key + "' must be \"log\" or a positive delta");
        try {
            return WeightScheme::power(v.get<double>());
        } catch (const std::invalid_argument& e) {
            throw user_error(context_ + ": " + e.what());
        }
    }

    std::vector<std::size_t> size_list(const std::string& key,
                                       std::vector<std::size_t> fallback) {
        mark(key);
        if (!config_.contains(key)) return fallback;
        const auto& v = config_[key];
        if (!v.is_array()) throw user_error(context_ + ": '" + key + "' must be an array");
        std::vector<std::size_t> out;
        for (const auto& item : v) {
            if (!item.is_number_integer() && !item.is_number_unsigned())
                throw user_error(context_ + ": '" + key + "' must hold integers");
            const auto value = item.get<std::int64_t>();
            if (value < 1) throw user_error(context_ + ": '" + key + "' entries must be >= 1");
            out.push_back(static_cast<std::size_t>(value));
        }
        return out;
    }

    /// Reject any key that was never consumed.
    void finish() const {
        for (const auto& [key, value] : config_.items())
            if (!seen_.count(key))
                throw user_error(context_ + ": unknown config key '" + key + "'");
    }

private:
    void mark(const std::string& key) { seen_.insert(key); }

    ordered_json config_;
    std::string context_;
    std::set<std::string> seen_;
};

}  // namespace sci::cli
