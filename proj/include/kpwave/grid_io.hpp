// Field export (CSV, plain PGM), CSV re-import and contour-band extraction.

#ifndef KPWAVE_GRID_IO_HPP
#define KPWAVE_GRID_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "kpwave/solutions.hpp"

namespace kpw {

struct ContourBand {
  double lower = 0.0, upper = 0.0;
  std::vector<std::pair<int, int>> cells;  // (i, j) with lower < value < upper
};

// Header "x,y,value,masked", then one row-major data line per node with 17
// significant digits; bit-exact round trip through import_csv.
std::string export_csv(const Field& field);

// Plain P2, maxval 65535.  Unmasked values map affinely from [min, max] to
// [0, 65535]; masked cells are written as 0; a degenerate range maps every
// unmasked cell to 32768.  The mapping is recorded in comment lines.
std::string export_pgm(const Field& field);

// Reconstructs a Field (values + mask + grid extent) from export_csv output.
Field import_csv(const std::string& text);

// Cells of the strict open band on unmasked values.
ContourBand contour_band(const Field& field, double lower, double upper);

void write_file(const std::string& path, const std::string& bytes);

}  // namespace kpw

#endif  // KPWAVE_GRID_IO_HPP
