#include "elastinet/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace elastinet::io {

namespace {

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, const std::string& path, int line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    // Allow surrounding spaces but nothing else.
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) {
        ++used;
    }
    if (used != cell.size() || cell.empty()) {
        throw ParseError(path + ":" + std::to_string(line) + ": expected a number, got '" +
                         cell + "'");
    }
    return value;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path + ": cannot open for reading");
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError(path + ": cannot open for writing");
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) row.push_back(parse_double(cell, path, line_no));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": row has " + std::to_string(row.size()) +
                             " columns, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(path + ": no rows found");
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

Vector read_vector(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        values.push_back(parse_double(line, path, line_no));
    }
    if (values.empty()) {
        throw ParseError(path + ": no values found");
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ofstream out = open_output(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void write_vector(const std::string& path, const Vector& v) {
    std::ofstream out = open_output(path);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out << format_double(v[i]) << '\n';
    }
}

void write_table_csv(std::ostream& out, const Table& table) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (j > 0) out << ',';
        out << table.columns[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) out << ',';
            out << row[j];
        }
        out << '\n';
    }
}

void write_table_json(std::ostream& out, const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj;
        for (std::size_t j = 0; j < table.columns.size() && j < row.size(); ++j) {
            obj[table.columns[j]] = row[j];
        }
        rows.push_back(std::move(obj));
    }
    out << rows.dump(2) << '\n';
}

Table read_table_csv(std::istream& in, const std::string& name) {
    Table table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (table.columns.empty()) {
            table.columns = std::move(cells);
        } else {
            if (cells.size() != table.columns.size()) {
                throw ParseError(name + ":" + std::to_string(line_no) +
                                 ": row width does not match header");
            }
            table.rows.push_back(std::move(cells));
        }
    }
    if (table.columns.empty()) {
        throw ParseError(name + ": missing header row");
    }
    return table;
}

} // namespace elastinet::io
