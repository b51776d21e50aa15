#pragma once

#include <iosfwd>
#include <string>

namespace opcalc {

class GriddedSet;

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double value);

/// CSV with header x,y[,z],occupied: one row per frame cell, cell centers as coordinates.
void write_grid_csv(std::ostream& out, const GriddedSet& grid);

/// Plain-text portable bitmap (P1) of a 1-D or 2-D grid; the first axis runs left to right
/// and the second axis bottom to top. Throws Unsupported for d > 2.
void write_grid_pbm(std::ostream& out, const GriddedSet& grid);

}  // namespace opcalc
