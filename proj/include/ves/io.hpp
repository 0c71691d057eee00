#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ves/calibration.hpp"
#include "ves/dynamics.hpp"

// File formats. CSV uses LF line endings, '.' decimal separator and
// shortest round-trip number formatting, independent of locale. Readers
// accept RFC-4180 quoting and tolerate CRLF input.

namespace ves {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

/// Locale-free strict double parse of a full token.
inline bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

struct CsvParseError : std::runtime_error {
    std::size_t line;
    CsvParseError(std::size_t line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

/// Split one CSV record; handles quoted fields with doubled-quote escapes.
inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) throw CsvParseError(line_no, "unterminated quoted field");
    fields.push_back(cur);
    return fields;
}

inline std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "t,sigma,price,share,logit_share\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out += format_double(tr.times[i]);
        out += ',';
        out += format_double(tr.sigma[i]);
        out += ',';
        out += format_double(tr.price[i]);
        out += ',';
        out += format_double(tr.share[i]);
        out += ',';
        out += format_double(tr.logit_share[i]);
        out += '\n';
    }
    return out;
}

/// Read observations from CSV with a header naming at least the `t` and
/// `share` columns; extra columns (e.g. a full trajectory file) are
/// ignored. Malformed input reports the offending line number.
inline std::vector<Observation> read_observations_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&](std::string& out) {
        if (!std::getline(in, out)) return false;
        ++line_no;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
    };

    if (!next_line(line)) throw CsvParseError(1, "missing header");
    const std::vector<std::string> header = split_csv_line(line, line_no);
    std::size_t t_col = header.size();
    std::size_t share_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "t") t_col = i;
        if (header[i] == "share") share_col = i;
    }
    if (t_col == header.size() || share_col == header.size())
        throw CsvParseError(1, "header must name 't' and 'share' columns");

    std::vector<Observation> obs;
    while (next_line(line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line, line_no);
        if (fields.size() < header.size())
            throw CsvParseError(line_no, "expected " + std::to_string(header.size()) +
                                             " fields, got " + std::to_string(fields.size()));
        Observation o{};
        if (!parse_double(fields[t_col], o.t))
            throw CsvParseError(line_no, "bad numeric value '" + fields[t_col] + "'");
        if (!parse_double(fields[share_col], o.share))
            throw CsvParseError(line_no, "bad numeric value '" + fields[share_col] + "'");
        obs.push_back(o);
    }
    return obs;
}

/// Minimal static SVG line chart of share vs time (fixed 800x500 viewBox).
/// Optional hollow-circle and cross markers sit on the curve at the two
/// elasticity thresholds.
inline std::string svg_share_chart(const Trajectory& tr,
                                   std::optional<std::pair<double, double>> circle,
                                   std::optional<std::pair<double, double>> cross) {
    constexpr double x0 = 60.0, x1 = 780.0, y0 = 460.0, y1 = 20.0;
    const double t_end = tr.times.back();
    auto px = [&](double t) { return x0 + (x1 - x0) * t / t_end; };
    auto py = [&](double r) { return y0 + (y1 - y0) * r; };
    auto num = [](double v) { return format_fixed(v, 2); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    // axes
    s += "<line x1=\"60\" y1=\"460\" x2=\"780\" y2=\"460\" stroke=\"black\"/>\n";
    s += "<line x1=\"60\" y1=\"460\" x2=\"60\" y2=\"20\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double t = t_end * i / 5.0;
        s += "<text x=\"" + num(px(t)) + "\" y=\"478\" font-size=\"12\" text-anchor=\"middle\">" +
             format_fixed(t, 1) + "</text>\n";
    }
    for (int i = 0; i <= 2; ++i) {
        const double r = i / 2.0;
        s += "<text x=\"52\" y=\"" + num(py(r) + 4.0) +
             "\" font-size=\"12\" text-anchor=\"end\">" + format_fixed(r, 1) + "</text>\n";
    }
    s += "<text x=\"420\" y=\"496\" font-size=\"13\" text-anchor=\"middle\">t (years)</text>\n";
    s += "<text x=\"16\" y=\"240\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 240)\">share</text>\n";

    s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        if (i) s += ' ';
        s += num(px(tr.times[i])) + "," + num(py(tr.share[i]));
    }
    s += "\"/>\n";

    if (circle && circle->first >= 0.0 && circle->first <= t_end) {
        s += "<circle cx=\"" + num(px(circle->first)) + "\" cy=\"" + num(py(circle->second)) +
             "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    if (cross && cross->first >= 0.0 && cross->first <= t_end) {
        const double cx = px(cross->first);
        const double cy = py(cross->second);
        s += "<line x1=\"" + num(cx - 5.0) + "\" y1=\"" + num(cy - 5.0) + "\" x2=\"" +
             num(cx + 5.0) + "\" y2=\"" + num(cy + 5.0) +
             "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        s += "<line x1=\"" + num(cx - 5.0) + "\" y1=\"" + num(cy + 5.0) + "\" x2=\"" +
             num(cx + 5.0) + "\" y2=\"" + num(cy - 5.0) +
             "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace ves
