#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include "opcalc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace opcalc::kernels::detail {

inline FirmViolation pair_violation(const Vector& x, const Vector& tx, const Vector& y,
                                    const Vector& ty) {
  const Vector dx = x - y;
  const Vector dt = tx - ty;
  const Vector dc = dx - dt;        // (x - Tx) - (y - Ty)
  const Vector dr = 2.0 * dt - dx;  // (2Tx - x) - (2Ty - y)
  return {dt.squaredNorm() - dx.dot(dt), dc.squaredNorm() - dx.dot(dc), dr.norm() - dx.norm()};
}

inline void merge(FirmViolation& into, const FirmViolation& v) {
  into.direct = std::max(into.direct, v.direct);
  into.complement = std::max(into.complement, v.complement);
  into.reflected = std::max(into.reflected, v.reflected);
}

inline double fitzpatrick_term(const Vector& a, const Vector& astar, const Vector& x,
                               const Vector& xstar) {
  return x.dot(astar) + a.dot(xstar) - a.dot(astar);
}

inline double rayleigh_term(const Matrix& m, const Vector& d, double cutoff) {
  const Vector md = m * d;
  const double n2 = md.squaredNorm();
  if (std::sqrt(n2) <= cutoff) return std::numeric_limits<double>::infinity();
  return d.dot(md) / n2;
}

inline void mark_pair(const double* a, const double* b, std::size_t dim, std::int64_t* cell) {
  for (std::size_t k = 0; k < dim; ++k) cell[k] = static_cast<std::int64_t>(std::floor(a[k] + b[k] + 0.5));
}

inline std::size_t line_count(const GridFrame& frame, std::size_t axis) {
  const auto e = static_cast<std::size_t>(frame.extent[axis]);
  return e == 0 ? 0 : frame.size() / e;
}

inline std::size_t line_base(const GridFrame& frame, std::size_t axis, std::size_t line) {
  const std::size_t stride = frame.stride(axis);
  const auto e = static_cast<std::size_t>(frame.extent[axis]);
  return (line / stride) * e * stride + line % stride;
}

inline void filter_line(const GridFrame& frame, std::span<const std::uint8_t> in,
                        std::span<std::uint8_t> out, std::size_t axis, std::size_t line,
                        bool dilate) {
  const std::size_t stride = frame.stride(axis);
  const auto n = static_cast<std::size_t>(frame.extent[axis]);
  const std::size_t base = line_base(frame, axis, line);
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint8_t left = j > 0 ? in[base + (j - 1) * stride] : 0;
    const std::uint8_t mid = in[base + j * stride];
    const std::uint8_t right = j + 1 < n ? in[base + (j + 1) * stride] : 0;
    out[base + j * stride] = dilate ? (left | mid | right) : (left & mid & right);
  }
}

// Felzenszwalb-Huttenlocher lower envelope on one line; scratch buffers are per caller.
inline void edt_line(const GridFrame& frame, std::span<double> values, std::size_t axis,
                     std::size_t line, std::vector<double>& f, std::vector<double>& z,
                     std::vector<std::size_t>& v) {
  const std::size_t stride = frame.stride(axis);
  const auto n = static_cast<std::size_t>(frame.extent[axis]);
  const std::size_t base = line_base(frame, axis, line);
  f.resize(n);
  z.resize(n + 1);
  v.resize(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = values[base + j * stride];

  std::size_t k = 0;
  bool any = false;
  for (std::size_t q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    if (!any) {
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
      any = true;
      continue;
    }
    const auto qd = static_cast<double>(q);
    double s;
    while (true) {
      const auto vk = static_cast<double>(v[k]);
      s = ((f[q] + qd * qd) - (f[v[k]] + vk * vk)) / (2.0 * qd - 2.0 * vk);
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[k]) {  // k == 0 and the new parabola dominates everywhere
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  if (!any) return;
  k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const auto qd = static_cast<double>(q);
    while (z[k + 1] < qd) ++k;
    const double d = qd - static_cast<double>(v[k]);
    values[base + q * stride] = d * d + f[v[k]];
  }
}

inline bool inside_faces(std::span<const HalfSpace> faces, const std::int64_t* cell, std::size_t dim) {
  for (const auto& face : faces) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < dim; ++k) s += face.normal[k] * cell[k];
    if (s > face.offset) return false;
  }
  return true;
}

}  // namespace opcalc::kernels::detail
