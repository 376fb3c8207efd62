#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsecon/critical_values.hpp"
#include "tsecon/ingest/csv.hpp"

namespace tsecon {

enum class ReportFormat { markdown, csv, json };

inline std::string_view to_string(ReportFormat f) noexcept {
    switch (f) {
        case ReportFormat::markdown: return "md";
        case ReportFormat::csv: return "csv";
        case ReportFormat::json: return "json";
    }
    return "?";
}

inline ReportFormat parse_format(const std::string& s) {
    if (s == "md" || s == "markdown") return ReportFormat::markdown;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw Error(ErrorKind::validation, "unknown format '" + s + "' (expected md, csv or json)");
}

inline JohansenCase parse_johansen_case(const std::string& s) {
    if (s == "1" || s == "none") return JohansenCase::none;
    if (s == "2" || s == "restricted_constant") return JohansenCase::restricted_constant;
    if (s == "3" || s == "unrestricted_constant") return JohansenCase::unrestricted_constant;
    if (s == "4" || s == "restricted_trend") return JohansenCase::restricted_trend;
    if (s == "5" || s == "unrestricted_trend") return JohansenCase::unrestricted_trend;
    throw Error(ErrorKind::validation, "unknown deterministic case '" + s + "'");
}

struct PipelineConfig {
    std::string data_path = "data/india_1980_2019.csv";
    std::vector<int> equations{1, 2, 3};
    JohansenCase det_case = JohansenCase::unrestricted_constant;
    int max_lag = 5;
    double trimming = 0.15;
    double level = 0.05;
    std::string out_dir = "report";
    std::uint64_t seed = 20240531;
    ReportFormat format = ReportFormat::markdown;
    bool replicate = false;
    int threads = 0;  // 0: one task per equation
    std::optional<int> lag;  // forces the estimation lag for every equation

    void validate() const {
        if (!(level > 0.0 && level <= 0.5)) throw Error(ErrorKind::validation, "level must lie in (0, 0.5]");
        if (max_lag < 1) throw Error(ErrorKind::validation, "max_lag must be at least 1");
        if (!(trimming > 0.0 && trimming <= 0.25)) throw Error(ErrorKind::validation, "trimming must lie in (0, 0.25]");
        if (equations.empty()) throw Error(ErrorKind::validation, "no equations selected");
        for (std::size_t i = 0; i < equations.size(); ++i) {
            const int e = equations[i];
            if (e < 1 || e > 3) throw Error(ErrorKind::validation, "unknown equation id " + std::to_string(e));
            for (std::size_t j = 0; j < i; ++j) {
                if (equations[j] == e) throw Error(ErrorKind::validation, "equation " + std::to_string(e) + " listed twice");
            }
        }
        if (lag && *lag < 1) throw Error(ErrorKind::validation, "lag must be at least 1");
        if (threads < 0) throw Error(ErrorKind::validation, "threads must be non-negative");
    }
};

namespace detail {

inline std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            const int x = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(x);
        } catch (const std::exception&) {
            throw Error(ErrorKind::validation, "'" + key + "': '" + tok + "' is not an integer");
        }
    }
    return out;
}

template <class T>
T parse_scalar(const std::string& v, const std::string& key) {
    std::istringstream ss(v);
    T x{};
    ss >> x;
    if (ss.fail() || !ss.eof()) throw Error(ErrorKind::validation, "'" + key + "': cannot parse '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error(ErrorKind::validation, "'" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace detail

/// Apply `key = value` lines over `cfg`. Blank lines and `#` comments are ignored.
inline void apply_config(PipelineConfig& cfg, std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::validation, "config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key == "data") {
            cfg.data_path = val;
        } else if (key == "equations") {
            cfg.equations = detail::parse_int_list(val, key);
        } else if (key == "deterministic") {
            cfg.det_case = parse_johansen_case(val);
        } else if (key == "max_lag") {
            cfg.max_lag = detail::parse_scalar<int>(val, key);
        } else if (key == "trimming") {
            cfg.trimming = detail::parse_scalar<double>(val, key);
        } else if (key == "level") {
            cfg.level = detail::parse_scalar<double>(val, key);
        } else if (key == "out") {
            cfg.out_dir = val;
        } else if (key == "seed") {
            cfg.seed = detail::parse_scalar<std::uint64_t>(val, key);
        } else if (key == "format") {
            cfg.format = parse_format(val);
        } else if (key == "replicate") {
            cfg.replicate = detail::parse_bool(val, key);
        } else if (key == "lag") {
            cfg.lag = detail::parse_scalar<int>(val, key);
        } else if (key == "threads") {
            cfg.threads = detail::parse_scalar<int>(val, key);
        } else {
            throw Error(ErrorKind::validation, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
}

inline PipelineConfig load_config(const std::string& path, PipelineConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
    apply_config(base, in);
    return base;
}

}  // namespace tsecon
