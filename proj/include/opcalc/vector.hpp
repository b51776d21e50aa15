#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace opcalc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A single-valued map on R^d. Firm nonexpansiveness is not implied.
using VectorMap = std::function<Vector(const Vector&)>;

Vector make_vector(std::initializer_list<double> coords);
Vector make_vector(const std::vector<double>& coords);
std::vector<double> to_std(const Vector& v);

bool is_finite(const Vector& v);

// Throw InvalidArgument naming `what` on failure.
void require_finite(const Vector& v, std::string_view what);
void require_dim(const Vector& v, std::size_t dim, std::string_view what);
void require_same_dim(const Vector& a, const Vector& b, std::string_view what);

/// Axis-aligned box whose bounds may be +-infinity ("unbounded" marker per axis).
struct HintBox {
  Vector lo;
  Vector hi;

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
  bool bounded() const;

  /// Scale about the center by `factor`; unbounded axes are first truncated to [-window, window].
  HintBox inflated(double factor, double window = 10.0) const;

  static HintBox unbounded(std::size_t dim);
};

}  // namespace opcalc
