#include "opcalc/grid.hpp"

#include "opcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opcalc {

std::size_t GridFrame::size() const {
  if (lo.empty()) return 0;
  std::size_t n = 1;
  for (auto e : extent) n *= static_cast<std::size_t>(std::max<std::int64_t>(e, 0));
  return n;
}

std::size_t GridFrame::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t k = axis + 1; k < extent.size(); ++k) s *= static_cast<std::size_t>(extent[k]);
  return s;
}

std::size_t GridFrame::flat(std::span<const std::int64_t> cell) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < lo.size(); ++k)
    index = index * static_cast<std::size_t>(extent[k]) + static_cast<std::size_t>(cell[k] - lo[k]);
  return index;
}

void GridFrame::unflat(std::size_t index, std::span<std::int64_t> cell) const {
  for (std::size_t k = lo.size(); k-- > 0;) {
    const auto e = static_cast<std::size_t>(extent[k]);
    cell[k] = lo[k] + static_cast<std::int64_t>(index % e);
    index /= e;
  }
}

bool GridFrame::contains(std::span<const std::int64_t> cell) const {
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (cell[k] < lo[k] || cell[k] >= lo[k] + extent[k]) return false;
  return size() > 0;
}

GridFrame GridFrame::padded(std::int64_t cells) const {
  if (size() == 0) return *this;
  GridFrame out = *this;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    out.lo[k] -= cells;
    out.extent[k] += 2 * cells;
  }
  return out;
}

GridFrame GridFrame::unite(const GridFrame& a, const GridFrame& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  GridFrame out = a;
  for (std::size_t k = 0; k < a.lo.size(); ++k) {
    const auto lo = std::min(a.lo[k], b.lo[k]);
    const auto hi = std::max(a.lo[k] + a.extent[k], b.lo[k] + b.extent[k]);
    out.lo[k] = lo;
    out.extent[k] = hi - lo;
  }
  return out;
}

GridFrame GridFrame::spanning(const CellIndex& min_cell, const CellIndex& max_cell) {
  GridFrame out{min_cell, CellIndex(min_cell.size())};
  for (std::size_t k = 0; k < min_cell.size(); ++k) out.extent[k] = max_cell[k] - min_cell[k] + 1;
  return out;
}

GridFrame GridFrame::empty(std::size_t dim) { return {CellIndex(dim, 0), CellIndex(dim, 0)}; }

GriddedSet::GriddedSet(double h, std::size_t dim) : GriddedSet(h, GridFrame::empty(dim)) {}

GriddedSet::GriddedSet(double h, GridFrame frame) : h_(h), frame_(std::move(frame)) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("GriddedSet: cell size must be > 0");
  if (frame_.lo.size() != frame_.extent.size() || frame_.lo.empty())
    throw InvalidArgument("GriddedSet: inconsistent frame");
  for (auto e : frame_.extent)
    if (e < 0) throw InvalidArgument("GriddedSet: negative extent");
  occupancy_.assign(frame_.size(), 0);
}

Vector GriddedSet::origin() const {
  Vector o(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) o[static_cast<Eigen::Index>(k)] = h_ * static_cast<double>(frame_.lo[k]);
  return o;
}

bool GriddedSet::occupied(std::span<const std::int64_t> cell) const {
  return frame_.contains(cell) && occupancy_[frame_.flat(cell)] != 0;
}

void GriddedSet::set(std::span<const std::int64_t> cell, bool value) {
  if (!frame_.contains(cell)) {
    if (!value) return;
    CellIndex c(cell.begin(), cell.end());
    *this = reframed(GridFrame::unite(frame_, GridFrame::spanning(c, c)));
  }
  occupancy_[frame_.flat(cell)] = value ? 1 : 0;
}

void GriddedSet::insert(const Vector& point) {
  require_dim(point, dim(), "GriddedSet::insert");
  const auto c = cell_of(point, h_);
  set(c, true);
}

std::size_t GriddedSet::count() const {
  return static_cast<std::size_t>(std::count(occupancy_.begin(), occupancy_.end(), std::uint8_t{1}));
}

Vector GriddedSet::center(std::span<const std::int64_t> cell) const {
  Vector c(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) c[static_cast<Eigen::Index>(k)] = h_ * static_cast<double>(cell[k]);
  return c;
}

Vector GriddedSet::center_of(std::size_t flat_index) const {
  CellIndex c(dim());
  frame_.unflat(flat_index, c);
  return center(c);
}

std::vector<std::int64_t> GriddedSet::occupied_cells() const {
  std::vector<std::int64_t> out;
  CellIndex c(dim());
  for (std::size_t i = 0; i < occupancy_.size(); ++i) {
    if (!occupancy_[i]) continue;
    frame_.unflat(i, c);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::vector<Vector> GriddedSet::centers() const {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < occupancy_.size(); ++i)
    if (occupancy_[i]) out.push_back(center_of(i));
  return out;
}

GriddedSet GriddedSet::reframed(const GridFrame& frame) const {
  GriddedSet out(h_, frame);
  if (frame.size() == 0) return out;
  CellIndex c(dim());
  for (std::size_t i = 0; i < occupancy_.size(); ++i) {
    if (!occupancy_[i]) continue;
    frame_.unflat(i, c);
    if (frame.contains(c)) out.occupancy_[frame.flat(c)] = 1;
  }
  return out;
}

GriddedSet GriddedSet::trimmed() const {
  const auto cells = occupied_cells();
  if (cells.empty()) return GriddedSet(h_, dim());
  const std::size_t d = dim();
  CellIndex lo(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(d)), hi = lo;
  for (std::size_t i = 0; i < cells.size(); i += d)
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], cells[i + k]);
      hi[k] = std::max(hi[k], cells[i + k]);
    }
  return reframed(GridFrame::spanning(lo, hi));
}

bool GriddedSet::same_cells(const GriddedSet& other) const {
  return compatible(*this, other) && occupied_cells() == other.occupied_cells();
}

CellIndex GriddedSet::cell_of(const Vector& point, double h) {
  CellIndex c(static_cast<std::size_t>(point.size()));
  for (Eigen::Index k = 0; k < point.size(); ++k) {
    const double q = std::floor(point[k] / h + 0.5);
    if (!std::isfinite(q) || std::abs(q) > 1e15) throw InvalidArgument("GriddedSet: point outside lattice range");
    c[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(q);
  }
  return c;
}

bool compatible(const GriddedSet& a, const GriddedSet& b) {
  return a.dim() == b.dim() && std::abs(a.cell() - b.cell()) <= 1e-12 * std::max(a.cell(), b.cell());
}

void require_compatible(const GriddedSet& a, const GriddedSet& b, const char* what) {
  if (!compatible(a, b))
    throw InvalidArgument(std::string(what) + ": grids differ in cell size or dimension");
}

GriddedSet set_union(const GriddedSet& a, const GriddedSet& b) {
  require_compatible(a, b, "set_union");
  GriddedSet out = a.reframed(GridFrame::unite(a.frame(), b.frame()));
  const auto other = b.reframed(out.frame());
  for (std::size_t i = 0; i < out.occupancy().size(); ++i) out.occupancy()[i] |= other.occupancy()[i];
  return out;
}

GriddedSet clip_to_window(const GriddedSet& g, double radius) {
  GriddedSet out(g.cell(), g.frame());
  CellIndex c(g.dim());
  for (std::size_t i = 0; i < g.occupancy().size(); ++i) {
    if (!g.occupancy()[i]) continue;
    g.frame().unflat(i, c);
    bool inside = true;
    for (auto v : c) inside = inside && std::abs(static_cast<double>(v) * g.cell()) <= radius * (1 + 1e-12);
    out.occupancy()[i] = inside ? 1 : 0;
  }
  return out.trimmed();
}

}  // namespace opcalc
