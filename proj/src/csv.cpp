#include "stefanlab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stefanlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const std::string& path, const SpaceTimeField& field) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const Grid1D& g = field.grid();
    out << "t";
    for (int i = 0; i <= g.n_cells; ++i) out << "," << format_double(g.x(i));
    out << "\n";
    for (int m = 0; m <= g.n_steps; ++m) {
        out << format_double(g.t(m));
        for (int i = 0; i <= g.n_cells; ++i) out << "," << format_double(field.at(m, i));
        out << "\n";
    }
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (std::size_t j = 0; j < header.size(); ++j) {
        out << (j ? "," : "") << header[j];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "," : "") << format_double(row[j]);
        }
        out << "\n";
    }
}

ScalarField read_initial_csv(const std::string& path, const Grid1D& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open initial-data file " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::vector<double> values;
    values.reserve(grid.n_nodes());
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string xs, us;
        if (!std::getline(ss, xs, ',') || !std::getline(ss, us, ',')) {
            throw std::runtime_error(path + ": malformed row " + std::to_string(row + 2));
        }
        const double x = std::stod(xs);
        const double u = std::stod(us);
        if (row >= grid.n_nodes()) throw std::runtime_error(path + ": too many rows for grid");
        if (std::abs(x - grid.x(row)) > 1e-9) {
            throw std::runtime_error(path + ": abscissa mismatch at row " +
                                     std::to_string(row + 2));
        }
        values.push_back(u);
        ++row;
    }
    if (row != grid.n_nodes()) {
        throw std::runtime_error(path + ": expected " + std::to_string(grid.n_nodes()) +
                                 " rows, got " + std::to_string(row));
    }
    return ScalarField(grid, std::move(values));
}

}  // namespace stefanlab
