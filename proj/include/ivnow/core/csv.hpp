#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ivnow {

// Minimal CSV support for the flat numeric tables this project exchanges.
// No quoting or embedded separators; fields are trimmed of surrounding
// whitespace. Errors carry file:line context.

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

double parse_double(std::string_view field, const std::string& context);
long parse_long(std::string_view field, const std::string& context);

struct CsvFile {
    std::string path;
    std::vector<std::string> header;
    // Row values, one inner vector per data line, plus its 1-based line number.
    std::vector<std::pair<int, std::vector<std::string>>> rows;

    int column(std::string_view name) const;            // -1 when absent
    int require_column(std::string_view name) const;    // throws parse_error
};

// Reads the whole file; requires a header line. `sep` also applies to the
// header. Empty lines are skipped.
CsvFile read_csv(const std::string& path, char sep = ',');

// Shortest round-trip decimal formatting (std::to_chars); locale-free and
// byte-stable across runs.
std::string fmt_double(double v);

}  // namespace ivnow
