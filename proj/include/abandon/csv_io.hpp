#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace abandon::csv {

// Shortest decimal string that parses back to exactly the same double.
// Stable across runs, which keeps CSV outputs byte-reproducible.
std::string format_double(double v);

struct NumericCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Header line followed by comma-separated double rows. Throws
// std::invalid_argument on ragged rows or unparsable cells.
NumericCsv read_numeric_csv(std::istream& in);
void write_numeric_csv(const NumericCsv& table, std::ostream& out);

// Two-column numeric file; a non-numeric first line is treated as a header
// and skipped. Throws std::invalid_argument on missing or malformed files.
std::vector<std::pair<double, double>> load_two_column_csv(const std::string& path);

}  // namespace abandon::csv
