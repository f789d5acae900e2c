#include "kpwave/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kpw {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* quantity_tag(const Quantity& q) {
  switch (q.kind) {
    case QuantityKind::Raw: return "raw";
    case QuantityKind::RegularizedLog: return "log";
    case QuantityKind::Clamped: return "clamp";
  }
  return "raw";
}

}  // namespace

std::string export_csv(const Field& field) {
  std::ostringstream os;
  os << "x,y,value,masked\n";
  for (int i = 0; i < field.grid.ny; ++i)
    for (int j = 0; j < field.grid.nx; ++j)
      os << fmt17(field.grid.x_at(j)) << ',' << fmt17(field.grid.y_at(i)) << ','
         << fmt17(field.at(i, j)) << ',' << (field.masked(i, j) ? "true" : "false")
         << '\n';
  return os.str();
}

std::string export_pgm(const Field& field) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < field.grid.ny; ++i)
    for (int j = 0; j < field.grid.nx; ++j)
      if (!field.masked(i, j) && std::isfinite(field.at(i, j))) {
        lo = std::min(lo, field.at(i, j));
        hi = std::max(hi, field.at(i, j));
      }
  bool degenerate = !(hi > lo);

  std::ostringstream os;
  os << "P2\n";
  os << "# kpwave field, quantity=" << quantity_tag(field.quantity);
  if (field.quantity.kind == QuantityKind::Clamped)
    os << ':' << fmt17(field.quantity.clamp_m);
  os << "\n";
  os << "# window x=[" << fmt17(field.grid.x_min) << ',' << fmt17(field.grid.x_max)
     << "] y=[" << fmt17(field.grid.y_min) << ',' << fmt17(field.grid.y_max)
     << "] t=" << fmt17(field.grid.t) << "\n";
  if (degenerate)
    os << "# map degenerate, all unmasked -> 32768\n";
  else
    os << "# map min=" << fmt17(lo) << " max=" << fmt17(hi)
       << " to [0,65535], masked -> 0\n";
  os << field.grid.nx << ' ' << field.grid.ny << "\n65535\n";
  for (int i = 0; i < field.grid.ny; ++i) {
    for (int j = 0; j < field.grid.nx; ++j) {
      int v = 0;
      if (!field.masked(i, j)) {
        if (degenerate)
          v = 32768;
        else
          v = static_cast<int>(std::lround((field.at(i, j) - lo) / (hi - lo) * 65535.0));
      }
      os << v << (j + 1 == field.grid.nx ? '\n' : ' ');
    }
  }
  return os.str();
}

Field import_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,value,masked")
    throw std::runtime_error("import_csv: bad header");

  std::vector<double> xs, ys, vals;
  std::vector<std::uint8_t> mask;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fx, fy, fv, fm;
    if (!std::getline(ls, fx, ',') || !std::getline(ls, fy, ',') ||
        !std::getline(ls, fv, ',') || !std::getline(ls, fm))
      throw std::runtime_error("import_csv: malformed row: " + line);
    xs.push_back(std::strtod(fx.c_str(), nullptr));
    ys.push_back(std::strtod(fy.c_str(), nullptr));
    vals.push_back(std::strtod(fv.c_str(), nullptr));
    mask.push_back(fm == "true" ? 1 : 0);
  }
  if (vals.empty()) throw std::runtime_error("import_csv: no data rows");

  size_t nx = 1;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  if (vals.size() % nx != 0) throw std::runtime_error("import_csv: ragged grid");
  size_t ny = vals.size() / nx;
  if (nx < 2 || ny < 2) throw std::runtime_error("import_csv: grid too small");

  Field f;
  f.grid.nx = static_cast<int>(nx);
  f.grid.ny = static_cast<int>(ny);
  f.grid.x_min = xs[0];
  f.grid.x_max = xs[nx - 1];
  f.grid.y_min = ys[0];
  f.grid.y_max = ys.back();
  f.values = vals;
  f.raw_values = std::move(vals);
  f.mask = std::move(mask);
  return f;
}

ContourBand contour_band(const Field& field, double lower, double upper) {
  if (!(lower < upper)) throw std::invalid_argument("contour_band: lower >= upper");
  ContourBand band;
  band.lower = lower;
  band.upper = upper;
  for (int i = 0; i < field.grid.ny; ++i)
    for (int j = 0; j < field.grid.nx; ++j) {
      if (field.masked(i, j)) continue;
      double v = field.at(i, j);
      if (v > lower && v < upper) band.cells.emplace_back(i, j);
    }
  return band;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kpw
