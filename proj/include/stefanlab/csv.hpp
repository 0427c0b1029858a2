// CSV serialization.  Field files carry a header row of x-coordinates and one
// row per time level with the time in the first column.  Doubles are printed
// with 17 significant digits so re-runs are byte-comparable.
#pragma once

#include <string>
#include <vector>

#include "stefanlab/grid.hpp"

namespace stefanlab {

std::string format_double(double v);

void write_field_csv(const std::string& path, const SpaceTimeField& field);

// Generic numeric table with a header line.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// Initial data file: header "x,u0", one row per node, abscissae must match
// the grid nodes to 1e-9.
ScalarField read_initial_csv(const std::string& path, const Grid1D& grid);

}  // namespace stefanlab
