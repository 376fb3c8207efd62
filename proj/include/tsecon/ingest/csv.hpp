#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsecon/core/series.hpp"

namespace tsecon {

/// Required columns and the sample to keep. GDPPC is stored raw and
/// turned into LGDP at load time.
struct DataSchema {
    std::string year_column = "year";
    std::vector<std::string> level_columns{"TRADE", "FD", "FID", "FMD", "GDPPC", "REER"};
    std::string gdp_column = "GDPPC";
    std::string log_gdp_role = "LGDP";
    std::optional<int> first_year;
    std::optional<int> last_year;

    static DataSchema india_1980_2019() {
        DataSchema s;
        s.first_year = 1980;
        s.last_year = 2019;
        return s;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
    double v = 0.0;
    const char* b = cell.data();
    const char* e = b + cell.size();
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (cell.empty() || ec != std::errc() || ptr != e || !std::isfinite(v)) {
        throw Error(ErrorKind::parse, "row " + std::to_string(row) + ", column '" + column + "': cannot parse '" +
                                          cell + "' as a number");
    }
    return v;
}

}  // namespace detail

/// Parse the CSV into a Dataset. Roles come out in schema order with the
/// GDP column replaced by its natural log.
inline Dataset load_csv(std::istream& in, const DataSchema& schema = DataSchema{}) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        header = detail::split_csv_line(t);
        break;
    }
    if (header.empty()) throw Error(ErrorKind::schema, "no header row found");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    auto require = [&](const std::string& name) {
        const auto it = col.find(name);
        if (it == col.end()) throw Error(ErrorKind::schema, "missing column '" + name + "'");
        return it->second;
    };
    const std::size_t ycol = require(schema.year_column);
    std::vector<std::size_t> vcols;
    for (const auto& c : schema.level_columns) vcols.push_back(require(c));

    std::vector<int> years;
    std::vector<std::vector<double>> values(schema.level_columns.size());
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = detail::split_csv_line(t);
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::parse, "row " + std::to_string(lineno) + ": expected " +
                                              std::to_string(header.size()) + " cells, found " +
                                              std::to_string(cells.size()));
        }
        const double yv = detail::parse_number(cells[ycol], lineno, schema.year_column);
        if (yv != std::floor(yv)) {
            throw Error(ErrorKind::parse, "row " + std::to_string(lineno) + ": year '" + cells[ycol] + "' is not an integer");
        }
        const int year = static_cast<int>(yv);
        if ((schema.first_year && year < *schema.first_year) || (schema.last_year && year > *schema.last_year)) continue;
        if (!years.empty() && year != years.back() + 1) {
            throw Error(ErrorKind::continuity, "year " + std::to_string(year) + " follows " + std::to_string(years.back()) +
                                                   " (row " + std::to_string(lineno) + ")");
        }
        years.push_back(year);
        for (std::size_t j = 0; j < vcols.size(); ++j) {
            values[j].push_back(detail::parse_number(cells[vcols[j]], lineno, schema.level_columns[j]));
        }
    }
    if (years.empty()) throw Error(ErrorKind::insufficient_data, "no data rows inside the schema sample");
    if (schema.first_year && years.front() != *schema.first_year) {
        throw Error(ErrorKind::continuity, "sample starts in " + std::to_string(years.front()) + ", expected " +
                                               std::to_string(*schema.first_year));
    }
    if (schema.last_year && years.back() != *schema.last_year) {
        throw Error(ErrorKind::continuity, "sample ends in " + std::to_string(years.back()) + ", expected " +
                                               std::to_string(*schema.last_year));
    }
    std::vector<Series> out;
    for (std::size_t j = 0; j < vcols.size(); ++j) {
        Series s(schema.level_columns[j], years.front(), std::move(values[j]));
        if (schema.level_columns[j] == schema.gdp_column) s = natural_log(s).renamed(schema.log_gdp_role);
        out.push_back(std::move(s));
    }
    return Dataset(std::move(out));
}

inline Dataset load_csv(const std::string& path, const DataSchema& schema = DataSchema{}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    return load_csv(in, schema);
}

/// Shortest decimal text that parses back to exactly v.
inline std::string format_full(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Write the Dataset back in loader format. LGDP is exponentiated back to
/// the raw column when the log role is present.
inline void write_csv(std::ostream& out, const Dataset& d, const DataSchema& schema = DataSchema{}) {
    out << schema.year_column;
    std::vector<std::pair<std::string, bool>> cols;  // role, exponentiate
    for (const auto& c : schema.level_columns) {
        if (c == schema.gdp_column && d.has(schema.log_gdp_role)) {
            cols.emplace_back(schema.log_gdp_role, true);
        } else {
            cols.emplace_back(c, false);
        }
        out << ',' << c;
    }
    out << '\n';
    for (std::size_t t = 0; t < d.num_obs(); ++t) {
        out << d.start_year() + static_cast<int>(t);
        for (const auto& [role, ex] : cols) {
            const double v = d.get(role)[t];
            out << ',' << format_full(ex ? std::exp(v) : v);
        }
        out << '\n';
    }
}

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string observed;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }
};

/// Anchor checks on the replication snapshot. Never throws.
inline ValidationReport snapshot_validate(const Dataset& d) {
    ValidationReport r;
    auto anchor = [&](const std::string& role, int year, double target, double tol) {
        ValidationCheck c;
        c.name = role + "(" + std::to_string(year) + ") = " + format_full(target) + " +/- " + format_full(tol);
        try {
            const double v = d.get(role).at_year(year);
            c.observed = format_full(v);
            c.passed = std::abs(v - target) <= tol;
        } catch (const Error& e) {
            c.observed = e.what();
        }
        r.checks.push_back(c);
    };
    anchor("TRADE", 1980, 15.4, 0.5);
    anchor("TRADE", 2019, 40.01, 0.5);
    for (const std::string role : {"FD", "FID", "FMD"}) {
        ValidationCheck c;
        c.name = role + " within [0, 1]";
        if (!d.has(role)) {
            c.observed = "missing";
        } else {
            const auto v = d.get(role).values();
            const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            c.observed = "[" + format_full(*lo) + ", " + format_full(*hi) + "]";
            c.passed = *lo >= 0.0 && *hi <= 1.0;
        }
        r.checks.push_back(c);
    }
    return r;
}

}  // namespace tsecon
