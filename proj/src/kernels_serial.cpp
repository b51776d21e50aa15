#include "kernel_detail.hpp"

#include "opcalc/errors.hpp"

namespace opcalc::kernels::serial {

std::vector<Vector> apply_map(const VectorMap& map, std::span<const Vector> points) {
  std::vector<Vector> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = map(points[i]);
  return out;
}

FirmViolation firm_violations(std::span<const Vector> xs, std::span<const Vector> txs,
                              std::span<const Vector> ys, std::span<const Vector> tys) {
  FirmViolation worst;
  for (std::size_t i = 0; i < xs.size(); ++i)
    detail::merge(worst, detail::pair_violation(xs[i], txs[i], ys[i], tys[i]));
  return worst;
}

double fitzpatrick_max(std::span<const Vector> points, std::span<const Vector> values,
                       const Vector& x, const Vector& xstar) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    best = std::max(best, detail::fitzpatrick_term(points[i], values[i], x, xstar));
  return best;
}

double rayleigh_min(const Matrix& m, std::span<const Vector> directions, double cutoff) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : directions) best = std::min(best, detail::rayleigh_term(m, d, cutoff));
  return best;
}

void minkowski_mark(std::span<const double> a, std::span<const double> b, std::size_t dim,
                    const GridFrame& frame, std::vector<std::uint8_t>& occupancy) {
  const std::size_t na = a.size() / dim, nb = b.size() / dim;
  std::vector<std::int64_t> cell(dim);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      detail::mark_pair(&a[i * dim], &b[j * dim], dim, cell.data());
      if (frame.contains(cell)) occupancy[frame.flat(cell)] = 1;
    }
}

void axis_filter(const GridFrame& frame, std::span<const std::uint8_t> in,
                 std::span<std::uint8_t> out, std::size_t axis, bool dilate) {
  const std::size_t lines = detail::line_count(frame, axis);
  for (std::size_t line = 0; line < lines; ++line) detail::filter_line(frame, in, out, axis, line, dilate);
}

void squared_edt_axis(const GridFrame& frame, std::span<double> values, std::size_t axis) {
  std::vector<double> f, z;
  std::vector<std::size_t> v;
  const std::size_t lines = detail::line_count(frame, axis);
  for (std::size_t line = 0; line < lines; ++line) detail::edt_line(frame, values, axis, line, f, z, v);
}

void mark_halfspaces(const GridFrame& frame, std::span<const HalfSpace> faces,
                     std::vector<std::uint8_t>& occupancy) {
  std::vector<std::int64_t> cell(frame.dim());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    frame.unflat(i, cell);
    if (detail::inside_faces(faces, cell.data(), frame.dim())) occupancy[i] = 1;
  }
}

double max_masked(std::span<const double> values, std::span<const std::uint8_t> mask,
                  std::size_t* argmax) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t at = values.size();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask[i] && (at == values.size() || values[i] > best)) {
      best = values[i];
      at = i;
    }
  if (argmax) *argmax = at;
  return best;
}

}  // namespace opcalc::kernels::serial
