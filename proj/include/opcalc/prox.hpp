#pragma once

#include "opcalc/convex_sets.hpp"
#include "opcalc/root_finding.hpp"
#include "opcalc/vector.hpp"

#include <memory>
#include <optional>
#include <string>

namespace opcalc {

/// Convex, lower semicontinuous, proper f with a proximal map. eval returns +inf off dom f.
class ConvexFunction {
 public:
  virtual ~ConvexFunction() = default;

  virtual double eval(const Vector& x) const = 0;
  virtual std::optional<Vector> subgradient(const Vector&) const { return std::nullopt; }
  /// argmin_u  1/2 |u - x|^2 + f(u)
  virtual Vector prox(const Vector& x) const = 0;
  virtual std::string descriptor() const = 0;
  /// Where f is finite (unbounded markers where the domain is the whole axis).
  virtual HintBox domain_box(std::size_t dim) const { return HintBox::unbounded(dim); }
};

using ConvexFunctionPtr = std::shared_ptr<const ConvexFunction>;

/// x -> prox_f(x). `source` is null for maps built by combination (e.g. proximal averages).
class ProxOracle {
 public:
  explicit ProxOracle(ConvexFunctionPtr source);
  ProxOracle(VectorMap prox, std::string descriptor);

  Vector operator()(const Vector& x) const { return prox_(x); }
  const ConvexFunctionPtr& source() const { return source_; }
  const std::string& descriptor() const { return descriptor_; }

 private:
  VectorMap prox_;
  ConvexFunctionPtr source_;
  std::string descriptor_;
};

/// Minimizer of 1/2|u-x|^2 + (a/2)|u|^2 + <b,u>, i.e. (x - b) / (1 + a).
Vector prox_quadratic(double a, const Vector& b, const Vector& x);

/// Componentwise soft threshold at 1 (prox of the l1 norm).
Vector prox_abs(const Vector& x);

/// Differentiable convex function on R with first and second derivatives.
struct SmoothScalarFunction {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::function<double(double)> f_second;
  std::string label;

  static SmoothScalarFunction exp();
  static SmoothScalarFunction linear(double slope);
  static SmoothScalarFunction zero();
};

/// Solves u + f'(u) = x.
double prox_smooth_1d(const SmoothScalarFunction& f, double x, const RootOptions& options = {});

class QuadraticFunction final : public ConvexFunction {
 public:
  QuadraticFunction(double a, Vector b);
  double eval(const Vector& x) const override;
  std::optional<Vector> subgradient(const Vector& x) const override;
  Vector prox(const Vector& x) const override;
  std::string descriptor() const override;

 private:
  double a_;
  Vector b_;
};

/// sum_i |x_i|
class AbsFunction final : public ConvexFunction {
 public:
  double eval(const Vector& x) const override;
  std::optional<Vector> subgradient(const Vector& x) const override;
  Vector prox(const Vector& x) const override;
  std::string descriptor() const override { return "abs"; }
};

/// sum_i g(x_i) for a smooth scalar g, prox by coordinatewise Newton.
class SeparableSmoothFunction final : public ConvexFunction {
 public:
  explicit SeparableSmoothFunction(SmoothScalarFunction g);
  double eval(const Vector& x) const override;
  std::optional<Vector> subgradient(const Vector& x) const override;
  Vector prox(const Vector& x) const override;
  std::string descriptor() const override { return "separable " + g_.label; }

 private:
  SmoothScalarFunction g_;
};

/// <c, x>; its prox is the translation x - c.
class LinearFunction final : public ConvexFunction {
 public:
  explicit LinearFunction(Vector c);
  double eval(const Vector& x) const override;
  std::optional<Vector> subgradient(const Vector& x) const override;
  Vector prox(const Vector& x) const override;
  std::string descriptor() const override;

 private:
  Vector c_;
};

/// Indicator of a closed convex set; its prox is the set's projection.
class IndicatorFunction final : public ConvexFunction {
 public:
  explicit IndicatorFunction(ConvexSetPtr set);
  double eval(const Vector& x) const override;
  Vector prox(const Vector& x) const override { return set_->project(x); }
  std::string descriptor() const override { return "indicator of " + set_->descriptor(); }
  HintBox domain_box(std::size_t) const override { return set_->hint_box(); }
  const ConvexSetPtr& set() const { return set_; }

 private:
  ConvexSetPtr set_;
};

}  // namespace opcalc
