#pragma once

#include "opcalc/root_finding.hpp"
#include "opcalc/vector.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace opcalc {

inline constexpr double kMembershipTolerance = 1e-8;

/// Nonempty closed convex set known through its projection (a "ConvexSetOracle").
/// Implementations are immutable; concurrent calls are safe.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;

  virtual std::size_t dim() const = 0;
  virtual Vector project(const Vector& x) const = 0;
  virtual bool contains(const Vector& x, double tol = kMembershipTolerance) const = 0;
  virtual HintBox hint_box() const = 0;
  virtual std::string descriptor() const = 0;
};

using ConvexSetPtr = std::shared_ptr<const ConvexSet>;

Vector project_box(const Vector& x, const Vector& lo, const Vector& hi);
Vector project_ball(const Vector& x, const Vector& center, double radius);
/// `basis` must be orthonormal within 1e-10.
Vector project_affine(const Vector& x, const Vector& point, std::span<const Vector> basis);

/// Convex, twice differentiable f on an interval; its epigraph lives in R^2.
struct EpigraphSpec {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::function<double(double)> f_second;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  std::string label;

  static EpigraphSpec exp();
  static EpigraphSpec square();

  /// Spot-checks midpoint convexity on random triples inside [-window, window] ∩ domain.
  /// Throws InvalidArgument on a violation larger than 1e-10 (relative to |f|).
  void validate(std::size_t triples = 1000, double window = 10.0, std::uint64_t seed = 7) const;
};

struct EpigraphProjection {
  Vector point;
  double stationarity = 0.0;  // |(u - x0) + f'(u)(f(u) - t0)| at the returned u
  int iterations = 0;
};

/// Nearest point of epi f to p = (x0, t0). Safeguarded Newton on the stationarity equation.
EpigraphProjection project_epigraph_detailed(const EpigraphSpec& spec, const Vector& p,
                                             const RootOptions& options = {});
Vector project_epigraph(const EpigraphSpec& spec, const Vector& p);

class Box final : public ConvexSet {
 public:
  Box(Vector lo, Vector hi);
  std::size_t dim() const override { return static_cast<std::size_t>(lo_.size()); }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  HintBox hint_box() const override { return {lo_, hi_}; }
  std::string descriptor() const override;
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }

 private:
  Vector lo_, hi_;
};

class Ball final : public ConvexSet {
 public:
  Ball(Vector center, double radius);
  std::size_t dim() const override { return static_cast<std::size_t>(center_.size()); }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  HintBox hint_box() const override;
  std::string descriptor() const override;

 private:
  Vector center_;
  double radius_;
};

/// point + span(basis), basis orthonormal.
class AffineSet final : public ConvexSet {
 public:
  AffineSet(Vector point, std::vector<Vector> basis);
  std::size_t dim() const override { return static_cast<std::size_t>(point_.size()); }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  HintBox hint_box() const override;
  std::string descriptor() const override;

 private:
  Vector point_;
  std::vector<Vector> basis_;
};

class Epigraph final : public ConvexSet {
 public:
  explicit Epigraph(EpigraphSpec spec);
  std::size_t dim() const override { return 2; }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  HintBox hint_box() const override;
  std::string descriptor() const override;
  const EpigraphSpec& spec() const { return spec_; }

 private:
  EpigraphSpec spec_;
};

}  // namespace opcalc
