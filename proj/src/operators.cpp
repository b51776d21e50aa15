#include "opcalc/operators.hpp"

#include "opcalc/errors.hpp"
#include "opcalc/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>

namespace opcalc {

FirmlyNonexpansiveMap::FirmlyNonexpansiveMap(VectorMap map, std::size_t dim, std::string descriptor)
    : map_(std::move(map)), dim_(dim), descriptor_(std::move(descriptor)) {
  if (!map_) throw InvalidArgument("FirmlyNonexpansiveMap: empty map");
  if (dim_ == 0) throw InvalidArgument("FirmlyNonexpansiveMap: dimension must be positive");
}

Vector FirmlyNonexpansiveMap::operator()(const Vector& x) const {
  require_dim(x, dim_, descriptor_);
  require_finite(x, descriptor_);
  return map_(x);
}

FirmlyNonexpansiveMap identity_map(std::size_t dim) {
  return {[](const Vector& x) { return x; }, dim, "identity"};
}

FirmlyNonexpansiveMap projection_map(ConvexSetPtr set) {
  if (!set) throw InvalidArgument("projection_map: null set");
  const std::size_t dim = set->dim();
  std::string label = "projection onto " + set->descriptor();
  return {[set = std::move(set)](const Vector& x) { return set->project(x); }, dim, std::move(label)};
}

FirmlyNonexpansiveMap prox_map(ProxOracle prox, std::size_t dim) {
  std::string label = prox.descriptor();
  return {[prox = std::move(prox)](const Vector& x) { return prox(x); }, dim, std::move(label)};
}

FirmlyNonexpansiveMap translation_map(Vector v) {
  require_finite(v, "translation_map");
  const auto dim = static_cast<std::size_t>(v.size());
  std::ostringstream label;
  label << "translation by vector of norm " << v.norm();
  return {[v = std::move(v)](const Vector& x) { return Vector(x + v); }, dim, label.str()};
}

FirmlyNonexpansiveMap complement_map(const FirmlyNonexpansiveMap& t) {
  const VectorMap& inner = t.map();
  return {[inner](const Vector& x) { return Vector(x - inner(x)); }, t.dim(),
          "identity minus " + t.descriptor()};
}

double GraphSample::worst_monotonicity_violation() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const double inner = (pairs[i].point - pairs[j].point).dot(pairs[i].value - pairs[j].value);
      worst = std::max(worst, -inner);
    }
  return pairs.size() < 2 ? 0.0 : worst;
}

MonotoneOperatorView::MonotoneOperatorView(FirmlyNonexpansiveMap resolvent)
    : resolvent_(std::move(resolvent)) {}

Vector MonotoneOperatorView::inverse_resolvent(const Vector& x) const { return x - resolvent_(x); }

GraphPair MonotoneOperatorView::minty_pair(const Vector& x) const {
  Vector j = resolvent_(x);
  Vector value = x - j;
  return {std::move(j), std::move(value)};
}

MonotoneOperatorView MonotoneOperatorView::inverse() const {
  return MonotoneOperatorView(complement_map(resolvent_));
}

LinearMonotoneOperator::LinearMonotoneOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw InvalidArgument("LinearMonotoneOperator: matrix must be square and nonempty");
  if (!m_.allFinite()) throw InvalidArgument("LinearMonotoneOperator: non-finite entry");
  const Matrix sym = 0.5 * (m_ + m_.transpose());
  const double lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (lambda_min < -1e-10) {
    std::ostringstream msg;
    msg << "LinearMonotoneOperator: symmetric part has eigenvalue " << lambda_min << " < 0";
    throw InvalidArgument(msg.str());
  }
}

LinearMonotoneOperator LinearMonotoneOperator::rotation(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  // cos(pi/2) is not exactly zero; clean the diagonal so the symmetric part is exactly 0.
  if (std::abs(r(0, 0)) < 1e-15) r(0, 0) = r(1, 1) = 0.0;
  return LinearMonotoneOperator(r);
}

namespace {

struct LinearResolvent {
  Matrix m;
  Eigen::PartialPivLU<Matrix> lu;

  explicit LinearResolvent(const Matrix& mat)
      : m(mat), lu(Matrix::Identity(mat.rows(), mat.cols()) + mat) {
    if (!(std::abs(lu.determinant()) > 0.0))
      throw NumericalFailure("resolvent_of_linear: I + M is singular");
  }

  Vector solve(const Vector& x) const {
    require_dim(x, static_cast<std::size_t>(m.rows()), "resolvent_of_linear");
    require_finite(x, "resolvent_of_linear");
    Vector u = lu.solve(x);
    const double residual = (u + m * u - x).norm();
    if (!(residual <= 1e-10 * (1.0 + x.norm()))) {
      std::ostringstream msg;
      msg << "resolvent_of_linear: residual " << residual << " exceeds tolerance";
      throw NumericalFailure(msg.str());
    }
    return u;
  }
};

}  // namespace

FirmlyNonexpansiveMap LinearMonotoneOperator::resolvent() const {
  auto solver = std::make_shared<const LinearResolvent>(m_);
  return {[solver](const Vector& x) { return solver->solve(x); }, dim(), "resolvent of linear operator"};
}

Vector resolvent_of_linear(const LinearMonotoneOperator& m, const Vector& x) {
  return LinearResolvent(m.matrix()).solve(x);
}

GraphSample minty_graph_sample(const MonotoneOperatorView& a, std::span<const Vector> probes) {
  for (const auto& p : probes) {
    require_dim(p, a.dim(), "minty_graph_sample");
    require_finite(p, "minty_graph_sample");
  }
  const auto js = kernels::parallel::apply_map(a.resolvent().map(), probes);
  GraphSample out;
  out.pairs.reserve(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) out.pairs.push_back({js[i], probes[i] - js[i]});
  return out;
}

double fitzpatrick_estimate(const GraphSample& g, const Vector& x, const Vector& xstar) {
  if (g.pairs.empty()) throw InvalidArgument("fitzpatrick_estimate: empty graph sample");
  require_same_dim(x, xstar, "fitzpatrick_estimate");
  std::vector<Vector> points, values;
  points.reserve(g.pairs.size());
  values.reserve(g.pairs.size());
  for (const auto& p : g.pairs) {
    require_same_dim(p.point, x, "fitzpatrick_estimate");
    points.push_back(p.point);
    values.push_back(p.value);
  }
  return kernels::parallel::fitzpatrick_max(points, values, x, xstar);
}

double rectangularity_gamma_estimate(const LinearMonotoneOperator& m, std::size_t n_samples) {
  if (n_samples < 1) throw InvalidArgument("rectangularity_gamma_estimate: need n_samples >= 1");
  auto directions = sphere_directions(m.dim(), n_samples);
  const Matrix sym = 0.5 * (m.matrix() + m.matrix().transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  for (Eigen::Index k = 0; k < eig.eigenvectors().cols(); ++k) directions.push_back(eig.eigenvectors().col(k));
  return kernels::parallel::rayleigh_min(m.matrix(), directions, 1e-12);
}

double FirmnessReport::worst() const { return std::max({direct, complement, reflected}); }

FirmnessReport check_firmly_nonexpansive(const VectorMap& t, const SampleRegion& region,
                                         double tolerance) {
  SampleRegion second = region;
  second.seed = region.seed ^ 0x9e3779b97f4a7c15ULL;
  const auto xs = uniform_points(region);
  const auto ys = uniform_points(second);
  const auto txs = kernels::parallel::apply_map(t, xs);
  const auto tys = kernels::parallel::apply_map(t, ys);
  const auto v = kernels::parallel::firm_violations(xs, txs, ys, tys);
  FirmnessReport report;
  report.direct = v.direct;
  report.complement = v.complement;
  report.reflected = v.reflected;
  report.pairs = region.count;
  report.tolerance = tolerance;
  report.passed = region.count > 0 && report.worst() <= tolerance;
  return report;
}

FirmnessReport check_firmly_nonexpansive(const FirmlyNonexpansiveMap& t, const SampleRegion& region,
                                         double tolerance) {
  if (region.dim() != t.dim()) throw InvalidArgument("check_firmly_nonexpansive: region dimension mismatch");
  return check_firmly_nonexpansive(VectorMap([&t](const Vector& x) { return t(x); }), region, tolerance);
}

SampleRegion region_around(const HintBox& box, std::size_t count, std::uint64_t seed, double window) {
  const HintBox inflated = box.inflated(3.0, window);
  return {inflated.lo, inflated.hi, count, seed};
}

}  // namespace opcalc
