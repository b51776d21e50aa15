#include "kernel_detail.hpp"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace opcalc::kernels {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

namespace {

// Exceptions must not cross an OpenMP region boundary; keep the first and rethrow after.
class ExceptionSlot {
 public:
  void capture() {
    std::lock_guard lock(mutex_);
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

using Index = std::int64_t;

}  // namespace

std::vector<Vector> apply_map(const VectorMap& map, std::span<const Vector> points) {
  std::vector<Vector> out(points.size());
  ExceptionSlot slot;
  const auto n = static_cast<Index>(points.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = map(points[static_cast<std::size_t>(i)]);
    } catch (...) {
      slot.capture();
    }
  }
  slot.rethrow();
  return out;
}

FirmViolation firm_violations(std::span<const Vector> xs, std::span<const Vector> txs,
                              std::span<const Vector> ys, std::span<const Vector> tys) {
  double direct = -std::numeric_limits<double>::infinity();
  double complement = direct, reflected = direct;
  const auto n = static_cast<Index>(xs.size());
#pragma omp parallel for schedule(static) reduction(max : direct, complement, reflected)
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto v = detail::pair_violation(xs[k], txs[k], ys[k], tys[k]);
    direct = std::max(direct, v.direct);
    complement = std::max(complement, v.complement);
    reflected = std::max(reflected, v.reflected);
  }
  return {direct, complement, reflected};
}

double fitzpatrick_max(std::span<const Vector> points, std::span<const Vector> values,
                       const Vector& x, const Vector& xstar) {
  double best = -std::numeric_limits<double>::infinity();
  const auto n = static_cast<Index>(points.size());
#pragma omp parallel for schedule(static) reduction(max : best)
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    best = std::max(best, detail::fitzpatrick_term(points[k], values[k], x, xstar));
  }
  return best;
}

double rayleigh_min(const Matrix& m, std::span<const Vector> directions, double cutoff) {
  double best = std::numeric_limits<double>::infinity();
  const auto n = static_cast<Index>(directions.size());
#pragma omp parallel for schedule(static) reduction(min : best)
  for (Index i = 0; i < n; ++i)
    best = std::min(best, detail::rayleigh_term(m, directions[static_cast<std::size_t>(i)], cutoff));
  return best;
}

void minkowski_mark(std::span<const double> a, std::span<const double> b, std::size_t dim,
                    const GridFrame& frame, std::vector<std::uint8_t>& occupancy) {
  const auto na = static_cast<Index>(a.size() / dim);
  const std::size_t nb = b.size() / dim;
  std::uint8_t* occ = occupancy.data();
#pragma omp parallel
  {
    std::vector<std::int64_t> cell(dim);
#pragma omp for schedule(dynamic, 16)
    for (Index i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        detail::mark_pair(&a[static_cast<std::size_t>(i) * dim], &b[j * dim], dim, cell.data());
        if (!frame.contains(cell)) continue;
        const std::size_t at = frame.flat(cell);
#pragma omp atomic write
        occ[at] = std::uint8_t{1};
      }
  }
}

void axis_filter(const GridFrame& frame, std::span<const std::uint8_t> in,
                 std::span<std::uint8_t> out, std::size_t axis, bool dilate) {
  const auto lines = static_cast<Index>(detail::line_count(frame, axis));
#pragma omp parallel for schedule(static)
  for (Index line = 0; line < lines; ++line)
    detail::filter_line(frame, in, out, axis, static_cast<std::size_t>(line), dilate);
}

void squared_edt_axis(const GridFrame& frame, std::span<double> values, std::size_t axis) {
  const auto lines = static_cast<Index>(detail::line_count(frame, axis));
#pragma omp parallel
  {
    std::vector<double> f, z;
    std::vector<std::size_t> v;
#pragma omp for schedule(static)
    for (Index line = 0; line < lines; ++line)
      detail::edt_line(frame, values, axis, static_cast<std::size_t>(line), f, z, v);
  }
}

void mark_halfspaces(const GridFrame& frame, std::span<const HalfSpace> faces,
                     std::vector<std::uint8_t>& occupancy) {
  const auto n = static_cast<Index>(frame.size());
#pragma omp parallel
  {
    std::vector<std::int64_t> cell(frame.dim());
#pragma omp for schedule(static)
    for (Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      frame.unflat(k, cell);
      if (detail::inside_faces(faces, cell.data(), frame.dim())) occupancy[k] = 1;
    }
  }
}

double max_masked(std::span<const double> values, std::span<const std::uint8_t> mask,
                  std::size_t* argmax) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t at = values.size();
  const auto n = static_cast<Index>(values.size());
#pragma omp parallel
  {
    double local_best = -std::numeric_limits<double>::infinity();
    std::size_t local_at = values.size();
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (mask[k] && (local_at == values.size() || values[k] > local_best)) {
        local_best = values[k];
        local_at = k;
      }
    }
#pragma omp critical(opcalc_max_masked)
    {
      const bool better = local_at != values.size() &&
                          (at == values.size() || local_best > best ||
                           (local_best == best && local_at < at));
      if (better) {
        best = local_best;
        at = local_at;
      }
    }
  }
  if (argmax) *argmax = at;
  return best;
}

}  // namespace parallel
}  // namespace opcalc::kernels
