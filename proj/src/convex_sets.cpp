#include "opcalc/convex_sets.hpp"

#include "opcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace opcalc {

namespace {

constexpr double kOrthonormalTolerance = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_orthonormal(std::span<const Vector> basis, std::size_t dim, const char* what) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    require_dim(basis[i], dim, what);
    require_finite(basis[i], what);
    for (std::size_t j = i; j < basis.size(); ++j) {
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(basis[i].dot(basis[j]) - expected) > kOrthonormalTolerance)
        throw InvalidArgument(std::string(what) + ": basis is not orthonormal");
    }
  }
}

std::string format_vector(const Vector& v) {
  std::ostringstream out;
  out << '(';
  for (Eigen::Index k = 0; k < v.size(); ++k) out << (k ? ", " : "") << v[k];
  out << ')';
  return out.str();
}

}  // namespace

Vector project_box(const Vector& x, const Vector& lo, const Vector& hi) {
  require_same_dim(x, lo, "project_box");
  require_same_dim(x, hi, "project_box");
  require_finite(x, "project_box");
  Vector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!(lo[k] <= hi[k])) throw InvalidArgument("project_box: lo > hi");
    out[k] = std::min(std::max(x[k], lo[k]), hi[k]);
  }
  return out;
}

Vector project_ball(const Vector& x, const Vector& center, double radius) {
  require_same_dim(x, center, "project_ball");
  require_finite(x, "project_ball");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("project_ball: radius must be > 0");
  const Vector offset = x - center;
  const double dist = offset.norm();
  if (dist <= radius) return x;
  return center + (radius / dist) * offset;
}

Vector project_affine(const Vector& x, const Vector& point, std::span<const Vector> basis) {
  require_same_dim(x, point, "project_affine");
  require_finite(x, "project_affine");
  require_orthonormal(basis, static_cast<std::size_t>(x.size()), "project_affine");
  const Vector offset = x - point;
  Vector out = point;
  for (const auto& b : basis) out += offset.dot(b) * b;
  return out;
}

EpigraphSpec EpigraphSpec::exp() {
  return {[](double u) { return std::exp(u); }, [](double u) { return std::exp(u); },
          [](double u) { return std::exp(u); }, -kInf, kInf, "exp"};
}

EpigraphSpec EpigraphSpec::square() {
  return {[](double u) { return u * u; }, [](double u) { return 2.0 * u; },
          [](double) { return 2.0; }, -kInf, kInf, "square"};
}

void EpigraphSpec::validate(std::size_t triples, double window, std::uint64_t seed) const {
  if (!f || !f_prime || !f_second) throw InvalidArgument("EpigraphSpec: missing callable");
  if (!(domain_lo < domain_hi)) throw InvalidArgument("EpigraphSpec: empty domain");
  const double a = std::max(domain_lo, -window), b = std::min(domain_hi, window);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(a, b);
  for (std::size_t i = 0; i < triples; ++i) {
    const double u = unit(rng), v = unit(rng);
    const double mid = f(0.5 * (u + v));
    const double chord = 0.5 * (f(u) + f(v));
    if (mid - chord > 1e-10 * std::max(1.0, std::abs(chord)))
      throw InvalidArgument("EpigraphSpec '" + label + "': midpoint convexity violated");
  }
}

EpigraphProjection project_epigraph_detailed(const EpigraphSpec& spec, const Vector& p,
                                             const RootOptions& options) {
  require_dim(p, 2, "project_epigraph");
  require_finite(p, "project_epigraph");
  const double x0 = p[0], t0 = p[1];
  if (x0 >= spec.domain_lo && x0 <= spec.domain_hi && t0 >= spec.f(x0)) return {p, 0.0, 0};

  // Stationarity (u - x0) + f'(u)(f(u) - t0) = 0 with the gap clamped at zero: the clamped
  // function is strictly increasing, and the roots it drops lie where f(u) < t0 (wrong sign).
  const auto g = [&](double u) { return (u - x0) + spec.f_prime(u) * std::max(spec.f(u) - t0, 0.0); };
  const auto dg = [&](double u) {
    const double gap = spec.f(u) - t0;
    if (gap <= 0.0) return 1.0;
    const double fp = spec.f_prime(u);
    return 1.0 + fp * fp + spec.f_second(u) * gap;
  };
  const double start = std::clamp(x0, spec.domain_lo, spec.domain_hi);
  RootResult root;
  try {
    root = solve_increasing(g, dg, start, options, spec.domain_lo, spec.domain_hi);
  } catch (const NumericalFailure& e) {
    std::ostringstream msg;
    msg << "project_epigraph(" << spec.label << ") at " << format_vector(p) << ": " << e.what();
    throw NumericalFailure(msg.str());
  }
  const double u = root.root;
  return {make_vector({u, spec.f(u)}), std::abs(root.residual), root.iterations};
}

Vector project_epigraph(const EpigraphSpec& spec, const Vector& p) {
  return project_epigraph_detailed(spec, p).point;
}

Box::Box(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_dim(lo_, hi_, "Box");
  if (lo_.size() == 0) throw InvalidArgument("Box: empty dimension");
  for (Eigen::Index k = 0; k < lo_.size(); ++k) {
    if (std::isnan(lo_[k]) || std::isnan(hi_[k]) || !(lo_[k] <= hi_[k]) || lo_[k] == kInf ||
        hi_[k] == -kInf)
      throw InvalidArgument("Box: need lo <= hi with -inf/+inf only as lower/upper markers");
  }
}

Vector Box::project(const Vector& x) const {
  require_dim(x, dim(), "Box::project");
  return project_box(x, lo_, hi_);
}

bool Box::contains(const Vector& x, double tol) const {
  require_dim(x, dim(), "Box::contains");
  return ((x.array() >= lo_.array() - tol) && (x.array() <= hi_.array() + tol)).all();
}

std::string Box::descriptor() const { return "box " + format_vector(lo_) + " .. " + format_vector(hi_); }

Ball::Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
  require_finite(center_, "Ball");
  if (center_.size() == 0) throw InvalidArgument("Ball: empty dimension");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("Ball: radius must be > 0");
}

Vector Ball::project(const Vector& x) const {
  require_dim(x, dim(), "Ball::project");
  return project_ball(x, center_, radius_);
}

bool Ball::contains(const Vector& x, double tol) const {
  require_dim(x, dim(), "Ball::contains");
  return (x - center_).norm() <= radius_ + tol;
}

HintBox Ball::hint_box() const {
  return {center_.array() - radius_, center_.array() + radius_};
}

std::string Ball::descriptor() const {
  std::ostringstream out;
  out << "ball center " << format_vector(center_) << " radius " << radius_;
  return out.str();
}

AffineSet::AffineSet(Vector point, std::vector<Vector> basis)
    : point_(std::move(point)), basis_(std::move(basis)) {
  require_finite(point_, "AffineSet");
  if (point_.size() == 0) throw InvalidArgument("AffineSet: empty dimension");
  require_orthonormal(basis_, dim(), "AffineSet");
}

Vector AffineSet::project(const Vector& x) const {
  require_dim(x, dim(), "AffineSet::project");
  require_finite(x, "AffineSet::project");
  const Vector offset = x - point_;
  Vector out = point_;
  for (const auto& b : basis_) out += offset.dot(b) * b;
  return out;
}

bool AffineSet::contains(const Vector& x, double tol) const {
  return (project(x) - x).norm() <= tol;
}

HintBox AffineSet::hint_box() const {
  HintBox box{point_, point_};
  for (Eigen::Index k = 0; k < point_.size(); ++k)
    for (const auto& b : basis_)
      if (std::abs(b[k]) > kOrthonormalTolerance) {
        box.lo[k] = -kInf;
        box.hi[k] = kInf;
      }
  return box;
}

std::string AffineSet::descriptor() const {
  std::ostringstream out;
  out << "affine set through " << format_vector(point_) << " of dimension " << basis_.size();
  return out.str();
}

Epigraph::Epigraph(EpigraphSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Vector Epigraph::project(const Vector& x) const { return project_epigraph(spec_, x); }

bool Epigraph::contains(const Vector& x, double tol) const {
  require_dim(x, 2, "Epigraph::contains");
  if (x[0] < spec_.domain_lo - tol || x[0] > spec_.domain_hi + tol) return false;
  const double u = std::clamp(x[0], spec_.domain_lo, spec_.domain_hi);
  return x[1] >= spec_.f(u) - tol;
}

HintBox Epigraph::hint_box() const {
  return {make_vector({spec_.domain_lo, -kInf}), make_vector({spec_.domain_hi, kInf})};
}

std::string Epigraph::descriptor() const { return "epigraph of " + spec_.label; }

}  // namespace opcalc
