#pragma once

#include <string>
#include <variant>
#include <vector>

namespace optocirc {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

// 17 significant digits, scientific notation.
std::string format_double(double v);

// Header line then one line per row, '\n' terminated. Throws DomainError for
// ragged rows.
std::string render_csv(const Table& t);

// Throws IoError when the file cannot be written.
void write_table(const Table& t, const std::string& path);

} // namespace optocirc
