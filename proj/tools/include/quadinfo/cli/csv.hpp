#pragma once

// Two-column `x,y` CSV ingestion and RFC-4180 field quoting.

#include <quadinfo/analog.hpp>
#include <quadinfo/discrete.hpp>

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace quadinfo::cli {

// Carries the 1-based line number of the offending input line (0 when the
// problem is not tied to a line).
class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct PairColumns {
    std::vector<std::string> x;
    std::vector<std::string> y;
    std::vector<std::size_t> lines;  // source line of each row
};

// Reads the header, locates the `x` and `y` columns and returns their raw
// fields. Extra columns are ignored.
PairColumns read_pair_columns(std::istream& in);

analog::RealPairedSamples read_real_pairs(std::istream& in);

// Symbols must be non-negative integers. Alphabet sizes default to max + 1.
discrete::DiscretePairedSamples read_symbol_pairs(std::istream& in, std::optional<std::size_t> nx = std::nullopt,
                                                  std::optional<std::size_t> ny = std::nullopt);

// Splits one record; honours double-quoted fields with "" escapes.
std::vector<std::string> split_record(std::string_view line);

std::string quote_field(std::string_view field);
std::string join_record(const std::vector<std::string>& fields);

// Shortest round-trip text for a double ("%.17g"); empty for NaN.
std::string format_number(double v);

}  // namespace quadinfo::cli
