#pragma once

#include "opcalc/vector.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace opcalc {

using CellIndex = std::vector<std::int64_t>;

/// Row-major block of lattice cells; the last axis varies fastest.
/// Cell k has its center at k * h, so grids sharing h are always aligned.
struct GridFrame {
  CellIndex lo;      // first cell along each axis
  CellIndex extent;  // number of cells along each axis

  std::size_t dim() const { return lo.size(); }
  std::size_t size() const;
  std::size_t stride(std::size_t axis) const;
  std::size_t flat(std::span<const std::int64_t> cell) const;
  void unflat(std::size_t index, std::span<std::int64_t> cell) const;
  bool contains(std::span<const std::int64_t> cell) const;
  GridFrame padded(std::int64_t cells) const;

  /// Smallest frame holding both; empty frames are ignored.
  static GridFrame unite(const GridFrame& a, const GridFrame& b);
  static GridFrame spanning(const CellIndex& min_cell, const CellIndex& max_cell);
  static GridFrame empty(std::size_t dim);

  bool operator==(const GridFrame&) const = default;
};

/// Finite set of occupied cells of side h (the toolkit's "GriddedSet").
class GriddedSet {
 public:
  GriddedSet(double h, std::size_t dim);
  GriddedSet(double h, GridFrame frame);

  double cell() const { return h_; }
  std::size_t dim() const { return frame_.dim(); }
  const GridFrame& frame() const { return frame_; }
  Vector origin() const;  // center of the first cell of the frame

  std::vector<std::uint8_t>& occupancy() { return occupancy_; }
  const std::vector<std::uint8_t>& occupancy() const { return occupancy_; }

  bool occupied(std::span<const std::int64_t> cell) const;
  void set(std::span<const std::int64_t> cell, bool value = true);
  /// Marks the cell nearest to `point`, growing the frame if needed.
  void insert(const Vector& point);

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  Vector center(std::span<const std::int64_t> cell) const;
  Vector center_of(std::size_t flat_index) const;
  /// Occupied cells, `dim()` integers per cell, in frame order.
  std::vector<std::int64_t> occupied_cells() const;
  std::vector<Vector> centers() const;

  /// Same cells in another frame; cells falling outside are dropped.
  GriddedSet reframed(const GridFrame& frame) const;
  /// Frame shrunk to the occupied bounding box.
  GriddedSet trimmed() const;

  bool same_cells(const GriddedSet& other) const;

  static CellIndex cell_of(const Vector& point, double h);

 private:
  double h_;
  GridFrame frame_;
  std::vector<std::uint8_t> occupancy_;
};

/// Grids of equal cell size and dimension can be combined cell by cell.
bool compatible(const GriddedSet& a, const GriddedSet& b);
void require_compatible(const GriddedSet& a, const GriddedSet& b, const char* what);

GriddedSet set_union(const GriddedSet& a, const GriddedSet& b);
/// Keeps cells whose centers lie in [-radius, radius]^d.
GriddedSet clip_to_window(const GriddedSet& g, double radius);

}  // namespace opcalc
