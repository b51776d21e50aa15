#include "opcalc/set_analysis.hpp"

#include "opcalc/errors.hpp"
#include "opcalc/kernels.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace opcalc {

PointCloudSet::PointCloudSet(std::vector<Vector> pts, std::size_t d, double h)
    : points(std::move(pts)), dim(d), resolution(h) {
  if (dim == 0) throw InvalidArgument("PointCloudSet: dimension must be positive");
  if (!(resolution > 0.0)) throw InvalidArgument("PointCloudSet: resolution must be > 0");
  for (const auto& p : points) {
    require_dim(p, dim, "PointCloudSet");
    require_finite(p, "PointCloudSet");
  }
}

namespace {

struct CenteredSvd {
  Vector mean;
  Matrix v;  // right singular vectors, columns by decreasing singular value
  Vector sigma;
  Matrix centered;
};

CenteredSvd centered_svd(const std::vector<Vector>& points, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto d = static_cast<Eigen::Index>(dim);
  CenteredSvd out;
  out.mean = Vector::Zero(d);
  for (const auto& p : points) out.mean += p;
  out.mean /= static_cast<double>(n);
  out.centered.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) out.centered.row(i) = (points[static_cast<std::size_t>(i)] - out.mean).transpose();
  if (n == 1) {
    out.v = Matrix::Identity(d, d);
    out.sigma = Vector::Zero(d);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(out.centered, Eigen::ComputeThinV);
  out.v = svd.matrixV();
  out.sigma = Vector::Zero(d);
  out.sigma.head(svd.singularValues().size()) = svd.singularValues();
  if (out.v.cols() < d) {  // fewer points than dimensions: complete the basis
    Eigen::HouseholderQR<Matrix> qr(out.v);
    const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    Matrix full(d, d);
    full.leftCols(out.v.cols()) = out.v;
    full.rightCols(d - out.v.cols()) = q.rightCols(d - out.v.cols());
    out.v = full;
  }
  return out;
}

AffineHullModel model_from(const CenteredSvd& s, std::size_t keep, double rank_tol) {
  AffineHullModel m;
  m.base_point = s.mean;
  m.dim_aff = keep;
  m.basis = s.v.leftCols(static_cast<Eigen::Index>(keep));
  m.rank_tol = rank_tol;
  m.singular_values = s.sigma;
  const Matrix residual = s.centered - (s.centered * m.basis) * m.basis.transpose();
  m.max_residual = residual.rows() ? residual.rowwise().norm().maxCoeff() : 0.0;
  return m;
}

GriddedSet from_cells(double h, const std::vector<std::int64_t>& cells, std::size_t dim, std::int64_t pad) {
  if (cells.empty()) return GriddedSet(h, dim);
  CellIndex lo(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(dim)), hi = lo;
  for (std::size_t i = 0; i < cells.size(); i += dim)
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], cells[i + k]);
      hi[k] = std::max(hi[k], cells[i + k]);
    }
  GriddedSet g(h, GridFrame::spanning(lo, hi).padded(pad));
  for (std::size_t i = 0; i < cells.size(); i += dim)
    g.occupancy()[g.frame().flat(std::span<const std::int64_t>(&cells[i], dim))] = 1;
  return g;
}

GriddedSet morphology(const GriddedSet& g, bool grow) {
  GriddedSet src = grow ? g.reframed(g.frame().padded(1)) : g;
  if (src.frame().size() == 0) return src;
  std::vector<std::uint8_t> a = src.occupancy(), b(a.size());
  for (std::size_t axis = 0; axis < src.dim(); ++axis) {
    kernels::parallel::axis_filter(src.frame(), a, b, axis, grow);
    a.swap(b);
  }
  src.occupancy() = std::move(a);
  return src;
}

}  // namespace

AffineHullModel affine_hull(const PointCloudSet& cloud, double rank_tol) {
  if (cloud.points.empty()) throw InvalidArgument("affine_hull: empty cloud");
  const auto s = centered_svd(cloud.points, cloud.dim);
  const double top = s.sigma.size() ? s.sigma.maxCoeff() : 0.0;
  std::size_t keep = 0;
  for (Eigen::Index k = 0; k < s.sigma.size(); ++k)
    if (top > 0.0 && s.sigma[k] > rank_tol * top) ++keep;
  return model_from(s, keep, rank_tol);
}

AffineHullModel affine_hull(const GriddedSet& grid) {
  const auto centers = grid.centers();
  if (centers.empty()) throw InvalidArgument("affine_hull: empty grid");
  const auto s = centered_svd(centers, grid.dim());
  const double spread_tol = 0.75 * grid.cell();
  std::size_t keep = 0;
  for (Eigen::Index k = 0; k < s.v.cols(); ++k) {
    const double spread = (s.centered * s.v.col(k)).cwiseAbs().maxCoeff();
    if (spread > spread_tol) keep = static_cast<std::size_t>(k) + 1;
  }
  return model_from(s, keep, spread_tol);
}

GriddedSet rasterize(std::span<const Vector> points, std::size_t dim, double h) {
  if (!(h > 0.0)) throw InvalidArgument("rasterize: cell size must be > 0");
  std::vector<std::int64_t> cells;
  cells.reserve(points.size() * dim);
  for (const auto& p : points) {
    require_dim(p, dim, "rasterize");
    require_finite(p, "rasterize");
    const auto c = GriddedSet::cell_of(p, h);
    cells.insert(cells.end(), c.begin(), c.end());
  }
  return from_cells(h, cells, dim, 2);
}

GriddedSet rasterize_region(const std::function<bool(const Vector&)>& inside, const HintBox& box, double h) {
  if (!box.bounded()) throw InvalidArgument("rasterize_region: the box must be bounded");
  if (!(h > 0.0)) throw InvalidArgument("rasterize_region: cell size must be > 0");
  const auto lo = GriddedSet::cell_of(box.lo, h);
  const auto hi = GriddedSet::cell_of(box.hi, h);
  GriddedSet g(h, GridFrame::spanning(lo, hi));
  for (std::size_t i = 0; i < g.occupancy().size(); ++i)
    if (inside(g.center_of(i))) g.occupancy()[i] = 1;
  return g.trimmed();
}

GriddedSet rasterize(const PointCloudSet& cloud, double h) { return rasterize(cloud.points, cloud.dim, h); }

GriddedSet dilate(const GriddedSet& g) { return morphology(g, true); }

GriddedSet erode(const GriddedSet& g) { return morphology(g, false); }

GriddedSet closure_grid(const GriddedSet& g) {
  if (g.empty()) return g;
  return erode(dilate(g)).trimmed();
}

GriddedSet relative_interior_grid(const GriddedSet& g, const AffineHullModel& hull) {
  if (g.empty() || hull.dim_aff == 0) return g;
  if (hull.dim_aff == g.dim()) return erode(g).trimmed();

  // Erode inside the flat: hull coordinates in cell units, a closing to bridge the lattice
  // gaps of tilted flats, then one erosion.
  const std::size_t k = hull.dim_aff;
  const double h = g.cell();
  std::vector<std::int64_t> lower_cells;
  std::vector<std::size_t> owners;
  CellIndex c(g.dim());
  for (std::size_t i = 0; i < g.occupancy().size(); ++i) {
    if (!g.occupancy()[i]) continue;
    const Vector t = hull.basis.transpose() * (g.center_of(i) - hull.base_point) / h;
    for (std::size_t j = 0; j < k; ++j)
      lower_cells.push_back(static_cast<std::int64_t>(std::floor(t[static_cast<Eigen::Index>(j)] + 0.5)));
    owners.push_back(i);
  }
  const GriddedSet lower = from_cells(1.0, lower_cells, k, 1);
  const GriddedSet interior = erode(closure_grid(lower));

  GriddedSet out(h, g.frame());
  for (std::size_t n = 0; n < owners.size(); ++n)
    if (interior.occupied(std::span<const std::int64_t>(&lower_cells[n * k], k))) out.occupancy()[owners[n]] = 1;
  return out.trimmed();
}

GriddedSet relative_interior_grid(const GriddedSet& g) {
  if (g.empty()) return g;
  return relative_interior_grid(g, affine_hull(g));
}

GriddedSet minkowski_combination(std::span<const GriddedSet> sets, std::span<const double> weights,
                                 std::size_t budget) {
  if (sets.empty() || sets.size() != weights.size())
    throw InvalidArgument("minkowski_combination: need one weight per set");
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("minkowski_combination: weights must be finite and >= 0");
  const double h = sets.front().cell();
  const std::size_t dim = sets.front().dim();
  for (const auto& s : sets) require_compatible(sets.front(), s, "minkowski_combination");
  double product = 1.0;
  for (const auto& s : sets) product *= static_cast<double>(s.count());
  if (product > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "minkowski_combination: " << product << " pair operations exceed the budget of " << budget
        << "; use a coarser cell size";
    throw BudgetExceeded(msg.str());
  }
  for (const auto& s : sets)
    if (s.empty()) return GriddedSet(h, dim);

  const auto scaled = [dim](const GriddedSet& g, double w) {
    std::vector<double> out;
    const auto cells = g.occupied_cells();
    out.reserve(cells.size());
    for (auto c : cells) out.push_back(w * static_cast<double>(c));
    (void)dim;
    return out;
  };

  std::vector<double> acc = scaled(sets[0], weights[0]);
  GriddedSet result(h, dim);
  if (sets.size() == 1) {
    std::vector<double> zero(dim, 0.0);
    CellIndex lo(dim), hi(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = static_cast<std::int64_t>(std::floor(weights[0] * static_cast<double>(sets[0].frame().lo[k]))) - 1;
      hi[k] = static_cast<std::int64_t>(std::ceil(weights[0] * static_cast<double>(sets[0].frame().lo[k] + sets[0].frame().extent[k]))) + 1;
    }
    result = GriddedSet(h, GridFrame::spanning(lo, hi));
    kernels::parallel::minkowski_mark(acc, zero, dim, result.frame(), result.occupancy());
    return result.trimmed();
  }
  for (std::size_t i = 1; i < sets.size(); ++i) {
    const std::vector<double> next = scaled(sets[i], weights[i]);
    CellIndex lo(dim), hi(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      double amin = std::numeric_limits<double>::infinity(), amax = -amin, bmin = amin, bmax = -amin;
      for (std::size_t j = k; j < acc.size(); j += dim) {
        amin = std::min(amin, acc[j]);
        amax = std::max(amax, acc[j]);
      }
      for (std::size_t j = k; j < next.size(); j += dim) {
        bmin = std::min(bmin, next[j]);
        bmax = std::max(bmax, next[j]);
      }
      lo[k] = static_cast<std::int64_t>(std::floor(amin + bmin)) - 1;
      hi[k] = static_cast<std::int64_t>(std::ceil(amax + bmax)) + 1;
    }
    result = GriddedSet(h, GridFrame::spanning(lo, hi));
    kernels::parallel::minkowski_mark(acc, next, dim, result.frame(), result.occupancy());
    if (i + 1 < sets.size()) {
      const auto cells = result.occupied_cells();
      acc.assign(cells.begin(), cells.end());
    }
  }
  return result.trimmed();
}

std::vector<double> distance_field(const GriddedSet& target, const GridFrame& frame) {
  std::vector<double> field(frame.size(), std::numeric_limits<double>::infinity());
  if (frame.size() == 0 || target.empty()) return field;
  // The transform runs on a frame holding the whole target so cells outside `frame` still count.
  const GridFrame work = GridFrame::unite(frame, target.trimmed().frame());
  const GriddedSet placed = target.reframed(work);
  std::vector<double> full(work.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < full.size(); ++i)
    if (placed.occupancy()[i]) full[i] = 0.0;
  for (std::size_t axis = 0; axis < work.dim(); ++axis) kernels::parallel::squared_edt_axis(work, full, axis);
  if (work == frame) {
    field.swap(full);
  } else {
    CellIndex cell(frame.dim());
    for (std::size_t i = 0; i < field.size(); ++i) {
      frame.unflat(i, cell);
      field[i] = full[work.flat(cell)];
    }
  }
  for (auto& v : field) v = std::sqrt(v);
  return field;
}

namespace {

// max over occupied cells of `from` of the distance to `to`, on a shared frame.
double directed_hausdorff(const GriddedSet& from, const GriddedSet& to, const GridFrame& frame) {
  const auto field = distance_field(to, frame);
  const GriddedSet placed = from.reframed(frame);
  return kernels::parallel::max_masked(field, placed.occupancy(), nullptr);
}

}  // namespace

double hausdorff_cells(const GriddedSet& a, const GriddedSet& b) {
  require_compatible(a, b, "hausdorff_cells");
  const bool ea = a.empty(), eb = b.empty();
  if (ea && eb) return 0.0;
  if (ea || eb) return std::numeric_limits<double>::infinity();
  const GridFrame frame = GridFrame::unite(a.frame(), b.frame());
  return std::max(directed_hausdorff(a, b, frame), directed_hausdorff(b, a, frame));
}

NearEqualityResult near_equal(const GriddedSet& a, const GriddedSet& b, double tol_cells) {
  require_compatible(a, b, "near_equal");
  const GriddedSet ca = closure_grid(a), cb = closure_grid(b);
  const GriddedSet ra = relative_interior_grid(ca), rb = relative_interior_grid(cb);
  NearEqualityResult r;
  r.metrics.tol_cells = tol_cells;
  r.metrics.closure_cells = hausdorff_cells(ca, cb);
  r.metrics.ri_cells = hausdorff_cells(ra, rb);
  r.metrics.closure_distance = r.metrics.closure_cells * a.cell();
  r.metrics.ri_distance = r.metrics.ri_cells * a.cell();
  const double slack = 1e-9;
  r.nearly_equal = r.metrics.closure_cells <= tol_cells + slack && r.metrics.ri_cells <= tol_cells + slack;
  return r;
}

NearConvexityResult nearly_convex(const GriddedSet& g, double tol_cells) {
  NearConvexityResult r;
  if (g.empty()) {
    r.nearly_convex = true;
    return r;
  }
  const GriddedSet hull = convex_hull_grid(g);
  const GriddedSet ri = relative_interior_grid(hull);
  const GridFrame frame = GridFrame::unite(ri.frame(), g.frame());
  const auto field = distance_field(g, frame);
  const GriddedSet placed = ri.reframed(frame);
  std::size_t at = 0;
  r.worst_cells = std::max(0.0, kernels::parallel::max_masked(field, placed.occupancy(), &at));
  for (std::size_t i = 0; i < field.size(); ++i)
    if (placed.occupancy()[i] && field[i] > tol_cells + 1e-9) ++r.offending;
  r.nearly_convex = r.offending == 0;
  if (!r.nearly_convex) r.witness = placed.center_of(at);
  return r;
}

}  // namespace opcalc
