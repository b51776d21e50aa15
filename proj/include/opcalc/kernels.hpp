#pragma once

// Data-parallel inner loops of the toolkit. Every kernel exists twice with identical
// signatures: `serial` is the plain reference used by the tests, `parallel` is the OpenMP
// version the modules call. Both must produce identical results (reductions are min/max,
// writes are idempotent), which tests/test_kernels.cpp checks.

#include "opcalc/grid.hpp"
#include "opcalc/vector.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace opcalc::kernels {

/// Worst violation of the three equivalent firm-nonexpansiveness inequalities over a batch.
/// Positive entries are violations.
struct FirmViolation {
  double direct = -std::numeric_limits<double>::infinity();      // |Tx-Ty|^2 - <x-y, Tx-Ty>
  double complement = -std::numeric_limits<double>::infinity();  // same for Id - T
  double reflected = -std::numeric_limits<double>::infinity();   // |Rx-Ry| - |x-y|, R = 2T - Id
};

/// Cell is inside iff normal . cell <= offset (integer lattice coordinates).
struct HalfSpace {
  std::vector<std::int64_t> normal;
  std::int64_t offset = 0;
};

namespace serial {

std::vector<Vector> apply_map(const VectorMap& map, std::span<const Vector> points);

FirmViolation firm_violations(std::span<const Vector> xs, std::span<const Vector> txs,
                              std::span<const Vector> ys, std::span<const Vector> tys);

/// max_i <x, v_i> + <p_i, x*> - <p_i, v_i>; -inf for an empty sample.
double fitzpatrick_max(std::span<const Vector> points, std::span<const Vector> values,
                       const Vector& x, const Vector& xstar);

/// min <d, Md> / |Md|^2 over directions with |Md| > cutoff; +inf if there are none.
double rayleigh_min(const Matrix& m, std::span<const Vector> directions, double cutoff);

/// Marks round(a_i + b_j) for all pairs; a and b hold `dim` coordinates per point in cell units.
void minkowski_mark(std::span<const double> a, std::span<const double> b, std::size_t dim,
                    const GridFrame& frame, std::vector<std::uint8_t>& occupancy);

/// One-cell max (dilate) or min (erode) filter along `axis`; cells outside the frame are empty.
void axis_filter(const GridFrame& frame, std::span<const std::uint8_t> in,
                 std::span<std::uint8_t> out, std::size_t axis, bool dilate);

/// One separable pass of the exact squared Euclidean distance transform (lower envelope of
/// parabolas) along `axis`, in place. Unreachable cells hold +inf.
void squared_edt_axis(const GridFrame& frame, std::span<double> values, std::size_t axis);

/// occupancy |= (every face holds at the cell).
void mark_halfspaces(const GridFrame& frame, std::span<const HalfSpace> faces,
                     std::vector<std::uint8_t>& occupancy);

/// Largest value where mask != 0 (lowest index on ties); -inf and argmax = size if none.
double max_masked(std::span<const double> values, std::span<const std::uint8_t> mask,
                  std::size_t* argmax);

}  // namespace serial

namespace parallel {

std::vector<Vector> apply_map(const VectorMap& map, std::span<const Vector> points);

FirmViolation firm_violations(std::span<const Vector> xs, std::span<const Vector> txs,
                              std::span<const Vector> ys, std::span<const Vector> tys);

/// max_i <x, v_i> + <p_i, x*> - <p_i, v_i>; -inf for an empty sample.
double fitzpatrick_max(std::span<const Vector> points, std::span<const Vector> values,
                       const Vector& x, const Vector& xstar);

/// min <d, Md> / |Md|^2 over directions with |Md| > cutoff; +inf if there are none.
double rayleigh_min(const Matrix& m, std::span<const Vector> directions, double cutoff);

/// Marks round(a_i + b_j) for all pairs; a and b hold `dim` coordinates per point in cell units.
void minkowski_mark(std::span<const double> a, std::span<const double> b, std::size_t dim,
                    const GridFrame& frame, std::vector<std::uint8_t>& occupancy);

/// One-cell max (dilate) or min (erode) filter along `axis`; cells outside the frame are empty.
void axis_filter(const GridFrame& frame, std::span<const std::uint8_t> in,
                 std::span<std::uint8_t> out, std::size_t axis, bool dilate);

/// One separable pass of the exact squared Euclidean distance transform (lower envelope of
/// parabolas) along `axis`, in place. Unreachable cells hold +inf.
void squared_edt_axis(const GridFrame& frame, std::span<double> values, std::size_t axis);

/// occupancy |= (every face holds at the cell).
void mark_halfspaces(const GridFrame& frame, std::span<const HalfSpace> faces,
                     std::vector<std::uint8_t>& occupancy);

/// Largest value where mask != 0 (lowest index on ties); -inf and argmax = size if none.
double max_masked(std::span<const double> values, std::span<const std::uint8_t> mask,
                  std::size_t* argmax);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int thread_count();

}  // namespace opcalc::kernels
