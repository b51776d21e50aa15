#include "opcalc/io.hpp"

#include "opcalc/errors.hpp"
#include "opcalc/grid.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace opcalc {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_grid_csv(std::ostream& out, const GriddedSet& grid) {
  static const char* const names[] = {"x", "y", "z"};
  const std::size_t d = grid.dim();
  for (std::size_t k = 0; k < d; ++k) out << (k < 3 ? std::string(names[k]) : "x" + std::to_string(k)) << ',';
  out << "occupied\n";
  for (std::size_t i = 0; i < grid.occupancy().size(); ++i) {
    const Vector c = grid.center_of(i);
    for (std::size_t k = 0; k < d; ++k) out << format_double(c[static_cast<Eigen::Index>(k)]) << ',';
    out << static_cast<int>(grid.occupancy()[i]) << '\n';
  }
}

void write_grid_pbm(std::ostream& out, const GriddedSet& grid) {
  const std::size_t d = grid.dim();
  if (d > 2) throw Unsupported("write_grid_pbm: only 1-D and 2-D grids can be written as bitmaps");
  const auto& f = grid.frame();
  const auto width = static_cast<std::size_t>(f.extent[0]);
  const std::size_t height = d == 2 ? static_cast<std::size_t>(f.extent[1]) : 1;
  out << "P1\n" << width << ' ' << height << '\n';
  for (std::size_t row = 0; row < height; ++row) {
    const std::size_t y = height - 1 - row;
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t index = d == 2 ? x * height + y : x;
      out << (grid.occupancy()[index] ? '1' : '0') << (x + 1 < width ? " " : "");
    }
    out << '\n';
  }
}

}  // namespace opcalc
