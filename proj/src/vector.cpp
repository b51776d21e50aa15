#include "opcalc/vector.hpp"

#include "opcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace opcalc {

Vector make_vector(std::initializer_list<double> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return v;
}

Vector make_vector(const std::vector<double>& coords) {
  return Eigen::Map<const Vector>(coords.data(), static_cast<Eigen::Index>(coords.size()));
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

bool is_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite coordinate");
}

void require_dim(const Vector& v, std::size_t dim, std::string_view what) {
  if (static_cast<std::size_t>(v.size()) != dim)
    throw InvalidArgument(std::string(what) + ": expected dimension " + std::to_string(dim) +
                          ", got " + std::to_string(v.size()));
}

void require_same_dim(const Vector& a, const Vector& b, std::string_view what) {
  if (a.size() != b.size())
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
}

bool HintBox::bounded() const { return lo.allFinite() && hi.allFinite(); }

HintBox HintBox::inflated(double factor, double window) const {
  HintBox out{lo, hi};
  for (Eigen::Index k = 0; k < lo.size(); ++k) {
    const double a = std::isfinite(lo[k]) ? lo[k] : -window;
    const double b = std::isfinite(hi[k]) ? hi[k] : window;
    const double center = 0.5 * (a + b);
    // Degenerate axes still get a unit half-width so off-set points are sampled.
    const double half = (b > a) ? 0.5 * (b - a) : 1.0;
    out.lo[k] = center - factor * half;
    out.hi[k] = center + factor * half;
  }
  return out;
}

HintBox HintBox::unbounded(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return {Vector::Constant(n, -std::numeric_limits<double>::infinity()),
          Vector::Constant(n, std::numeric_limits<double>::infinity())};
}

}  // namespace opcalc
