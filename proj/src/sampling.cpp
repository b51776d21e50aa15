#include "opcalc/sampling.hpp"

#include "opcalc/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace opcalc {

SampleRegion SampleRegion::cube(std::size_t dim, double half_width, std::size_t count,
                                std::uint64_t seed) {
  return {Vector::Constant(static_cast<Eigen::Index>(dim), -half_width),
          Vector::Constant(static_cast<Eigen::Index>(dim), half_width), count, seed};
}

namespace {

void check_region(const SampleRegion& region) {
  if (region.lo.size() != region.hi.size() || region.lo.size() == 0)
    throw InvalidArgument("sample region: bad dimensions");
  if (!is_finite(region.lo) || !is_finite(region.hi))
    throw InvalidArgument("sample region: bounds must be finite");
  if ((region.hi - region.lo).minCoeff() < 0.0)
    throw InvalidArgument("sample region: lo > hi");
}

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr std::array<unsigned, 8> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

std::vector<Vector> uniform_points(const SampleRegion& region) {
  check_region(region);
  std::mt19937_64 rng(region.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> out(region.count, Vector(region.lo.size()));
  for (auto& p : out)
    for (Eigen::Index k = 0; k < p.size(); ++k)
      p[k] = region.lo[k] + unit(rng) * (region.hi[k] - region.lo[k]);
  return out;
}

std::vector<Vector> uniform_sweep(double lo, double hi, std::size_t count) {
  std::vector<Vector> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(make_vector({0.5 * (lo + hi)}));
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(make_vector({lo + t * (hi - lo)}));
  }
  return out;
}

std::vector<Vector> halton_points(const SampleRegion& region) {
  check_region(region);
  if (region.dim() > kPrimes.size()) throw Unsupported("halton_points: dimension > 8");
  std::vector<Vector> out(region.count, Vector(region.lo.size()));
  for (std::size_t i = 0; i < region.count; ++i)
    for (Eigen::Index k = 0; k < region.lo.size(); ++k)
      out[i][k] = region.lo[k] + radical_inverse(i + 1, kPrimes[static_cast<std::size_t>(k)]) *
                                     (region.hi[k] - region.lo[k]);
  return out;
}

std::vector<Vector> probe_points(const SampleRegion& region) {
  if (region.dim() == 1) return uniform_sweep(region.lo[0], region.hi[0], region.count);
  return halton_points(region);
}

std::vector<Vector> sphere_directions(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0 || count == 0) throw InvalidArgument("sphere_directions: empty request");
  std::vector<Vector> out;
  out.reserve(count);
  const double n = static_cast<double>(count);
  if (dim == 1) {
    out.push_back(make_vector({1.0}));
    out.push_back(make_vector({-1.0}));
  } else if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
      out.push_back(make_vector({std::cos(theta), std::sin(theta)}));
    }
  } else if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      out.push_back(make_vector({r * std::cos(phi), r * std::sin(phi), z}));
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    while (out.size() < count) {
      Vector v(static_cast<Eigen::Index>(dim));
      for (auto& c : v) c = normal(rng);
      const double norm = v.norm();
      if (norm > 1e-12) out.push_back(v / norm);
    }
  }
  return out;
}

}  // namespace opcalc
