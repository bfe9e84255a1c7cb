#include "quadinfo/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace quadinfo::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& field, std::size_t line, const char* column) {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, v);
    if (field.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw CsvError(line, std::string("column ") + column + ": not a finite number: '" + field + "'");
    return v;
}

std::uint32_t parse_symbol(const std::string& field, std::size_t line, const char* column) {
    unsigned long long v = 0;
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, v);
    if (field.empty() || res.ec != std::errc() || res.ptr != end || v > std::numeric_limits<std::uint32_t>::max())
        throw CsvError(line, std::string("column ") + column + ": not a non-negative integer symbol: '" + field + "'");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

CsvError::CsvError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

PairColumns read_pair_columns(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) {
            header = split_record(line);
            break;
        }
    }
    if (header.empty()) throw CsvError(0, "input is empty; expected a header with columns x,y");
    const auto find = [&](const char* name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw CsvError(lineno, std::string("header has no '") + name + "' column");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ix = find("x");
    const std::size_t iy = find("y");

    PairColumns n;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto rec = split_record(line);
        if (rec.size() != header.size())
            throw CsvError(lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                                       std::to_string(rec.size()));
        n.x.push_back(rec[ix]);
        n.y.push_back(rec[iy]);
        n.lines.push_back(lineno);
    }
    return n;
}

analog::RealPairedSamples read_real_pairs(std::istream& in) {
    const PairColumns n = read_pair_columns(in);
    std::vector<double> x(n.lines.size()), y(n.lines.size());
    for (std::size_t i = 0; i < n.lines.size(); ++i) {
        x[i] = parse_real(n.x[i], n.lines[i], "x");
        y[i] = parse_real(n.y[i], n.lines[i], "y");
    }
    return analog::RealPairedSamples(std::move(x), std::move(y));
}

discrete::DiscretePairedSamples read_symbol_pairs(std::istream& in, std::optional<std::size_t> nx,
                                                  std::optional<std::size_t> ny) {
    const PairColumns n = read_pair_columns(in);
    if (n.lines.empty()) throw CsvError(0, "no data rows");
    std::vector<std::uint32_t> x(n.lines.size()), y(n.lines.size());
    for (std::size_t i = 0; i < n.lines.size(); ++i) {
        x[i] = parse_symbol(n.x[i], n.lines[i], "x");
        y[i] = parse_symbol(n.y[i], n.lines[i], "y");
        if (nx && x[i] >= *nx) throw CsvError(n.lines[i], "x symbol " + n.x[i] + " is outside the alphabet");
        if (ny && y[i] >= *ny) throw CsvError(n.lines[i], "y symbol " + n.y[i] + " is outside the alphabet");
    }
    const std::size_t ax = nx.value_or(*std::max_element(x.begin(), x.end()) + std::size_t{1});
    const std::size_t ay = ny.value_or(*std::max_element(y.begin(), y.end()) + std::size_t{1});
    return discrete::DiscretePairedSamples(std::move(x), std::move(y), ax, ay);
}

std::string quote_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_record(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += quote_field(fields[i]);
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace quadinfo::cli
