#include "opcalc/prox.hpp"

#include "opcalc/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace opcalc {

ProxOracle::ProxOracle(ConvexFunctionPtr source)
    : prox_(), source_(std::move(source)), descriptor_() {
  if (!source_) throw InvalidArgument("ProxOracle: null function");
  const ConvexFunction* f = source_.get();
  prox_ = [f](const Vector& x) { return f->prox(x); };
  descriptor_ = "prox of " + source_->descriptor();
}

ProxOracle::ProxOracle(VectorMap prox, std::string descriptor)
    : prox_(std::move(prox)), source_(nullptr), descriptor_(std::move(descriptor)) {
  if (!prox_) throw InvalidArgument("ProxOracle: empty map");
}

Vector prox_quadratic(double a, const Vector& b, const Vector& x) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("prox_quadratic: a must be >= 0");
  require_same_dim(b, x, "prox_quadratic");
  require_finite(x, "prox_quadratic");
  return (x - b) / (1.0 + a);
}

Vector prox_abs(const Vector& x) {
  require_finite(x, "prox_abs");
  Vector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k)
    out[k] = std::copysign(std::max(std::abs(x[k]) - 1.0, 0.0), x[k]);
  return out;
}

SmoothScalarFunction SmoothScalarFunction::exp() {
  return {[](double u) { return std::exp(u); }, [](double u) { return std::exp(u); },
          [](double u) { return std::exp(u); }, "exp"};
}

SmoothScalarFunction SmoothScalarFunction::linear(double slope) {
  std::ostringstream label;
  label << "linear(" << slope << ")";
  return {[slope](double u) { return slope * u; }, [slope](double) { return slope; },
          [](double) { return 0.0; }, label.str()};
}

SmoothScalarFunction SmoothScalarFunction::zero() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }, "zero"};
}

double prox_smooth_1d(const SmoothScalarFunction& f, double x, const RootOptions& options) {
  if (!std::isfinite(x)) throw InvalidArgument("prox_smooth_1d: non-finite argument");
  const auto g = [&](double u) { return u + f.f_prime(u) - x; };
  const auto dg = [&](double u) { return 1.0 + f.f_second(u); };
  try {
    return solve_increasing(g, dg, x, options).root;
  } catch (const NumericalFailure& e) {
    std::ostringstream msg;
    msg << "prox_smooth_1d(" << f.label << ", " << x << "): " << e.what();
    throw NumericalFailure(msg.str());
  }
}

QuadraticFunction::QuadraticFunction(double a, Vector b) : a_(a), b_(std::move(b)) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("QuadraticFunction: a must be >= 0");
  require_finite(b_, "QuadraticFunction");
}

double QuadraticFunction::eval(const Vector& x) const {
  require_same_dim(x, b_, "QuadraticFunction::eval");
  return 0.5 * a_ * x.squaredNorm() + b_.dot(x);
}

std::optional<Vector> QuadraticFunction::subgradient(const Vector& x) const {
  require_same_dim(x, b_, "QuadraticFunction::subgradient");
  return Vector(a_ * x + b_);
}

Vector QuadraticFunction::prox(const Vector& x) const { return prox_quadratic(a_, b_, x); }

std::string QuadraticFunction::descriptor() const {
  std::ostringstream out;
  out << "quadratic(a=" << a_ << ")";
  return out.str();
}

double AbsFunction::eval(const Vector& x) const { return x.lpNorm<1>(); }

std::optional<Vector> AbsFunction::subgradient(const Vector& x) const {
  Vector g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) g[k] = (x[k] > 0) - (x[k] < 0);
  return g;
}

Vector AbsFunction::prox(const Vector& x) const { return prox_abs(x); }

SeparableSmoothFunction::SeparableSmoothFunction(SmoothScalarFunction g) : g_(std::move(g)) {
  if (!g_.f || !g_.f_prime || !g_.f_second) throw InvalidArgument("SeparableSmoothFunction: missing callable");
}

double SeparableSmoothFunction::eval(const Vector& x) const {
  double s = 0.0;
  for (double c : x) s += g_.f(c);
  return s;
}

std::optional<Vector> SeparableSmoothFunction::subgradient(const Vector& x) const {
  Vector g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) g[k] = g_.f_prime(x[k]);
  return g;
}

Vector SeparableSmoothFunction::prox(const Vector& x) const {
  require_finite(x, "SeparableSmoothFunction::prox");
  Vector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) out[k] = prox_smooth_1d(g_, x[k]);
  return out;
}

LinearFunction::LinearFunction(Vector c) : c_(std::move(c)) { require_finite(c_, "LinearFunction"); }

double LinearFunction::eval(const Vector& x) const {
  require_same_dim(x, c_, "LinearFunction::eval");
  return c_.dot(x);
}

std::optional<Vector> LinearFunction::subgradient(const Vector&) const { return c_; }

Vector LinearFunction::prox(const Vector& x) const {
  require_same_dim(x, c_, "LinearFunction::prox");
  require_finite(x, "LinearFunction::prox");
  return x - c_;
}

std::string LinearFunction::descriptor() const {
  std::ostringstream out;
  out << "linear(|c|=" << c_.norm() << ")";
  return out.str();
}

IndicatorFunction::IndicatorFunction(ConvexSetPtr set) : set_(std::move(set)) {
  if (!set_) throw InvalidArgument("IndicatorFunction: null set");
}

double IndicatorFunction::eval(const Vector& x) const {
  return set_->contains(x, kMembershipTolerance) ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace opcalc
