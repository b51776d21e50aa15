#pragma once

#include "opcalc/vector.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace opcalc {

/// Axis-aligned sampling region plus a count and seed. All samplers are deterministic.
struct SampleRegion {
  Vector lo;
  Vector hi;
  std::size_t count = 10000;
  std::uint64_t seed = 1;

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
  static SampleRegion cube(std::size_t dim, double half_width, std::size_t count,
                           std::uint64_t seed = 1);
};

/// Pseudo-random uniform points (mt19937_64).
std::vector<Vector> uniform_points(const SampleRegion& region);

/// `count` equally spaced points covering [lo, hi] (1-D sweep).
std::vector<Vector> uniform_sweep(double lo, double hi, std::size_t count);

/// Halton low-discrepancy points (bases 2, 3, 5, ...) scaled to the region; skips index 0.
std::vector<Vector> halton_points(const SampleRegion& region);

/// The default range probe set: a sweep in 1-D, Halton points otherwise.
std::vector<Vector> probe_points(const SampleRegion& region);

/// Deterministic unit vectors: evenly spaced angles (d = 2), the Fibonacci sphere (d = 3),
/// normalized Gaussians from `seed` otherwise.
std::vector<Vector> sphere_directions(std::size_t dim, std::size_t count, std::uint64_t seed = 1);

}  // namespace opcalc
