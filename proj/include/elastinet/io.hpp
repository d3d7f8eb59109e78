#pragma once

#include "elastinet/types.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastinet::io {

/// Parse failure carrying file name and 1-based line number in what().
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trippable decimal representation (printf %.17g).
std::string format_double(double v);

/// Matrices: one CSV row per matrix row, no header. Vectors: one value per
/// line. All files use '.' decimals and LF line endings.
Matrix read_matrix_csv(const std::string& path);
Vector read_vector(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);
void write_vector(const std::string& path, const Vector& v);

/// Result table with a header row; cells are preformatted strings so failed
/// entries can carry the "-" marker.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_table_csv(std::ostream& out, const Table& table);
void write_table_json(std::ostream& out, const Table& table);
Table read_table_csv(std::istream& in, const std::string& name = "<stream>");

} // namespace elastinet::io
