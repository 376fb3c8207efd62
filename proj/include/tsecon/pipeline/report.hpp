#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "tsecon/error.hpp"
#include "tsecon/ingest/csv.hpp"
#include "tsecon/pipeline/config.hpp"

namespace tsecon {

/// One table cell. `precision` applies to markdown only; negative means
/// six significant digits instead of fixed decimals.
struct Cell {
    enum class Kind { empty, number, integer, text };
    Kind kind = Kind::empty;
    double number = 0.0;
    long long integer = 0;
    std::string text;
    int precision = 4;

    static Cell blank() { return {}; }
    static Cell num(double v, int precision = 4) {
        Cell c;
        c.kind = Kind::number;
        c.number = v;
        c.precision = precision;
        return c;
    }
    static Cell whole(long long v) {
        Cell c;
        c.kind = Kind::integer;
        c.integer = v;
        return c;
    }
    static Cell str(std::string s) {
        Cell c;
        c.kind = Kind::text;
        c.text = std::move(s);
        return c;
    }
};

struct Table {
    std::string tag;    // e.g. table_5, table_A2, errors
    int equation = 0;   // 0 for tables spanning all equations
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::string file_stem() const { return equation > 0 ? tag + "_eq" + std::to_string(equation) : tag; }
    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

namespace detail {

inline std::string number_text(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_full(v == 0.0 ? 0.0 : v);
}

inline std::string md_number(double v, int precision) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    if (precision < 0) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.*f", precision, v);
        // Avoid "-0.0000".
        if (std::string(buf).find_first_not_of("-0.") == std::string::npos && buf[0] == '-') {
            return std::string(buf + 1);
        }
    }
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

inline std::vector<std::pair<std::string, bool>> split_csv_quoted(const std::string& line) {
    std::vector<std::pair<std::string, bool>> out;  // text, was_quoted
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (true) {
        std::string cell;
        bool quoted = false;
        if (i < n && line[i] == '"') {
            quoted = true;
            ++i;
            while (i < n) {
                if (line[i] == '"') {
                    if (i + 1 < n && line[i + 1] == '"') {
                        cell += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                cell += line[i++];
            }
        } else {
            while (i < n && line[i] != ',') cell += line[i++];
        }
        out.emplace_back(cell, quoted);
        if (i >= n) break;
        if (line[i] != ',') throw Error(ErrorKind::parse, "malformed CSV near column " + std::to_string(i));
        ++i;
    }
    return out;
}

}  // namespace detail

inline std::string render_csv(const Table& t) {
    std::ostringstream out;
    out << "# tag: " << t.tag << '\n';
    out << "# equation: " << t.equation << '\n';
    out << "# title: " << t.title << '\n';
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << detail::csv_quote(t.columns[j]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            const Cell& c = row[j];
            switch (c.kind) {
                case Cell::Kind::empty: break;
                case Cell::Kind::number: out << detail::number_text(c.number); break;
                case Cell::Kind::integer: out << c.integer; break;
                case Cell::Kind::text: out << detail::csv_quote(c.text); break;
            }
        }
        out << '\n';
    }
    return out.str();
}

/// Inverse of render_csv: text cells are quoted, numbers are bare.
inline Table parse_csv_table(std::istream& in) {
    Table t;
    std::string line;
    bool have_header = false;
    auto meta = [&](const std::string& l, const std::string& key, std::string& dst) {
        const std::string p = "# " + key + ": ";
        if (l.rfind(p, 0) == 0) {
            dst = l.substr(p.size());
            return true;
        }
        return false;
    };
    while (std::getline(in, line)) {
        if (!have_header && !line.empty() && line[0] == '#') {
            std::string eq;
            if (meta(line, "tag", t.tag) || meta(line, "title", t.title)) continue;
            if (meta(line, "equation", eq)) {
                t.equation = std::stoi(eq);
                continue;
            }
            continue;
        }
        const auto cells = detail::split_csv_quoted(line);
        if (!have_header) {
            for (const auto& [s, q] : cells) t.columns.push_back(s);
            have_header = true;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& [s, q] : cells) {
            if (q) {
                row.push_back(Cell::str(s));
            } else if (s.empty()) {
                row.push_back(Cell::blank());
            } else if (s == "NaN") {
                row.push_back(Cell::num(std::nan("")));
            } else if (s == "inf" || s == "-inf") {
                row.push_back(Cell::num(s[0] == '-' ? -HUGE_VAL : HUGE_VAL));
            } else if (s.find_first_of(".eE") == std::string::npos) {
                row.push_back(Cell::whole(std::stoll(s)));
            } else {
                row.push_back(Cell::num(detail::parse_number(s, 0, "cell")));
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(ErrorKind::parse, "table CSV has no header row");
    return t;
}

inline std::string render_markdown(const Table& t) {
    std::ostringstream out;
    out << "## " << t.title << "\n\n";
    out << '|';
    for (const auto& c : t.columns) out << ' ' << detail::md_escape(c) << " |";
    out << "\n|";
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << " --- |";
    out << '\n';
    for (const auto& row : t.rows) {
        out << '|';
        for (const Cell& c : row) {
            out << ' ';
            switch (c.kind) {
                case Cell::Kind::empty: out << '-'; break;
                case Cell::Kind::number: out << detail::md_number(c.number, c.precision); break;
                case Cell::Kind::integer: out << c.integer; break;
                case Cell::Kind::text: out << detail::md_escape(c.text); break;
            }
            out << " |";
        }
        out << '\n';
    }
    return out.str();
}

inline nlohmann::ordered_json table_json(const Table& t) {
    nlohmann::ordered_json j;
    j["tag"] = t.tag;
    j["equation"] = t.equation;
    j["title"] = t.title;
    j["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const Cell& c : row) {
            switch (c.kind) {
                case Cell::Kind::empty: r.push_back(nullptr); break;
                case Cell::Kind::number:
                    if (std::isfinite(c.number)) {
                        r.push_back(c.number);
                    } else {
                        r.push_back(detail::number_text(c.number));
                    }
                    break;
                case Cell::Kind::integer: r.push_back(c.integer); break;
                case Cell::Kind::text: r.push_back(c.text); break;
            }
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline std::string render_json(const Table& t) { return table_json(t).dump(2) + "\n"; }

inline std::string render_table(const Table& t, ReportFormat f) {
    switch (f) {
        case ReportFormat::markdown: return render_markdown(t);
        case ReportFormat::csv: return render_csv(t);
        case ReportFormat::json: return render_json(t);
    }
    return {};
}

inline std::string render_index(const std::vector<Table>& tables, ReportFormat f) {
    const std::string ext(to_string(f));
    if (f == ReportFormat::json) {
        nlohmann::ordered_json j;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& t : tables) {
            nlohmann::ordered_json e;
            e["file"] = t.file_stem() + "." + ext;
            e["tag"] = t.tag;
            e["equation"] = t.equation;
            e["title"] = t.title;
            arr.push_back(std::move(e));
        }
        j["tables"] = std::move(arr);
        return j.dump(2) + "\n";
    }
    Table idx;
    idx.tag = "index";
    idx.title = "Report index";
    idx.columns = {"file", "tag", "equation", "title"};
    for (const auto& t : tables) {
        idx.add({Cell::str(t.file_stem() + "." + ext), Cell::str(t.tag), Cell::whole(t.equation), Cell::str(t.title)});
    }
    return render_table(idx, f);
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + p.string() + "'");
    out << text;
    if (!out) throw Error(ErrorKind::io, "write failed for '" + p.string() + "'");
}

/// One file per table plus index.<ext>. Returns the written paths.
inline std::vector<std::filesystem::path> write_tables(const std::vector<Table>& tables, const std::string& dir,
                                                       ReportFormat f) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir + "': " + ec.message());
    const std::string ext(to_string(f));
    std::vector<std::filesystem::path> out;
    for (const auto& t : tables) {
        const auto p = std::filesystem::path(dir) / (t.file_stem() + "." + ext);
        write_text_file(p, render_table(t, f));
        out.push_back(p);
    }
    const auto p = std::filesystem::path(dir) / ("index." + ext);
    write_text_file(p, render_index(tables, f));
    out.push_back(p);
    return out;
}

}  // namespace tsecon
