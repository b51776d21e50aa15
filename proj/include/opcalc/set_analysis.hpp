#pragma once

// Discretized set calculus. Topology is approximated at the cell size h: "closure" is a
// morphological closing, "relative interior" a one-cell erosion inside the detected affine
// hull, and near equality / near convexity become Hausdorff-distance tests with a tolerance
// counted in cells.

#include "opcalc/grid.hpp"
#include "opcalc/vector.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace opcalc {

struct PointCloudSet {
  std::vector<Vector> points;
  std::size_t dim = 0;
  double resolution = 1.0;  // intended sampling density h

  PointCloudSet() = default;
  PointCloudSet(std::vector<Vector> points, std::size_t dim, double resolution);
};

/// base_point + span(basis columns).
struct AffineHullModel {
  Vector base_point;
  Matrix basis;  // dim x dim_aff, orthonormal columns
  std::size_t dim_aff = 0;
  double rank_tol = 0.0;
  double max_residual = 0.0;  // largest distance of an input point from the flat
  Vector singular_values;
};

inline constexpr double kDefaultRankTolerance = 1e-8;

/// Orthonormal basis of the centered cloud via SVD; singular directions below
/// rank_tol * (largest singular value) are dropped. Throws on an empty cloud.
AffineHullModel affine_hull(const PointCloudSet& cloud, double rank_tol = kDefaultRankTolerance);

/// Affine hull of the occupied cell centers at cell resolution: a direction is kept when the
/// centers spread more than 3/4 of a cell from the fitted flat along it.
AffineHullModel affine_hull(const GriddedSet& grid);

/// Marks every cell holding a point; the frame is the bounding box grown by 2 cells.
GriddedSet rasterize(const PointCloudSet& cloud, double h);
GriddedSet rasterize(std::span<const Vector> points, std::size_t dim, double h);

/// Cells of `box` (which must be bounded) whose centers satisfy `inside`.
GriddedSet rasterize_region(const std::function<bool(const Vector&)>& inside, const HintBox& box, double h);

/// One-cell dilation / erosion by the 3^d cube.
GriddedSet dilate(const GriddedSet& g);
GriddedSet erode(const GriddedSet& g);

/// Dilate then erode; idempotent.
GriddedSet closure_grid(const GriddedSet& g);

/// Erodes by one cell within the affine hull: plain erosion for full-dimensional sets,
/// erosion in hull coordinates otherwise (so lower-dimensional sets do not vanish), identity
/// for singletons.
GriddedSet relative_interior_grid(const GriddedSet& g, const AffineHullModel& hull);
GriddedSet relative_interior_grid(const GriddedSet& g);

/// Cells of the convex hull of the occupied cell centers (d <= 3, Unsupported otherwise).
GriddedSet convex_hull_grid(const GriddedSet& g);

inline constexpr std::size_t kMinkowskiBudget = 100000000;

/// sum_i lambda_i A_i over occupied cell centers, re-rasterized at the common cell size.
/// More than two sets are folded pairwise (each fold rounds to the lattice once).
/// Throws BudgetExceeded when the product of occupied counts exceeds `budget`.
GriddedSet minkowski_combination(std::span<const GriddedSet> sets, std::span<const double> weights,
                                 std::size_t budget = kMinkowskiBudget);

/// Euclidean distance (in cells) from each cell of `frame` to the nearest occupied cell of
/// `target`; +inf everywhere when the target is empty.
std::vector<double> distance_field(const GriddedSet& target, const GridFrame& frame);

/// Hausdorff distance in cells; 0 for two empty sets, +inf if exactly one is empty.
double hausdorff_cells(const GriddedSet& a, const GriddedSet& b);

inline constexpr double kDefaultToleranceCells = 2.0;

struct NearEqualityMetrics {
  double closure_distance = 0.0;  // world units
  double ri_distance = 0.0;
  double closure_cells = 0.0;
  double ri_cells = 0.0;
  double tol_cells = kDefaultToleranceCells;
};

struct NearEqualityResult {
  bool nearly_equal = false;
  NearEqualityMetrics metrics;
};

/// Closures within tol_cells and relative interiors within tol_cells (Hausdorff).
/// The relative interior is taken of the closure so sampling gaps do not grow into holes.
NearEqualityResult near_equal(const GriddedSet& a, const GriddedSet& b,
                              double tol_cells = kDefaultToleranceCells);

struct NearConvexityResult {
  bool nearly_convex = false;
  std::optional<Vector> witness;  // farthest offending cell center when not nearly convex
  double worst_cells = 0.0;       // distance of the worst cell of ri conv g from g
  std::size_t offending = 0;
};

/// Every cell of ri conv g lies within tol_cells of g.
NearConvexityResult nearly_convex(const GriddedSet& g, double tol_cells = kDefaultToleranceCells);

}  // namespace opcalc
