#include "abandon/csv_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace abandon::csv {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_cell(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && first != last;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

NumericCsv read_numeric_csv(std::istream& in) {
    NumericCsv table;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("CSV input is empty");
    table.columns = split_line(strip_cr(line));
    if (table.columns.empty()) throw std::invalid_argument("CSV header has no columns");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != table.columns.size())
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(table.columns.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (!parse_cell(cells[c], row[c]))
                throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                            ": cannot parse cell '" + cells[c] + "'");
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_numeric_csv(const NumericCsv& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
}

std::vector<std::pair<double, double>> load_two_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open CSV file: " + path);

    std::vector<std::pair<double, double>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != 2)
            throw std::invalid_argument(path + " line " + std::to_string(line_no) +
                                        ": expected two columns");
        double a = 0.0, b = 0.0;
        if (!parse_cell(cells[0], a) || !parse_cell(cells[1], b)) {
            if (line_no == 1) continue;  // header line
            throw std::invalid_argument(path + " line " + std::to_string(line_no) +
                                        ": cannot parse numeric cells");
        }
        out.emplace_back(a, b);
    }
    if (out.empty()) throw std::invalid_argument(path + " holds no numeric rows");
    return out;
}

}  // namespace abandon::csv
