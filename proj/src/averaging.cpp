#include "opcalc/averaging.hpp"

#include "opcalc/errors.hpp"
#include "opcalc/set_analysis.hpp"
#include "opcalc/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

namespace opcalc {

void validate_weights(std::span<const double> weights) {
  if (weights.empty()) throw InvalidArgument("weights: empty family");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("weights: every weight must be > 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "weights: sum is " << sum << ", expected 1";
    throw InvalidArgument(msg.str());
  }
}

WeightedFamily::WeightedFamily(std::vector<FirmlyNonexpansiveMap> members, std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw InvalidArgument("WeightedFamily: no members");
  if (members_.size() != weights_.size()) throw InvalidArgument("WeightedFamily: members/weights size mismatch");
  validate_weights(weights_);
  for (const auto& m : members_)
    if (m.dim() != members_.front().dim()) throw InvalidArgument("WeightedFamily: members differ in dimension");
}

FirmlyNonexpansiveMap average_maps(const WeightedFamily& family) {
  std::ostringstream label;
  label << "average of";
  for (std::size_t i = 0; i < family.size(); ++i)
    label << (i ? ", " : " ") << family.weights()[i] << " * [" << family.members()[i].descriptor() << "]";
  auto members = family.members();
  auto weights = family.weights();
  return {[members = std::move(members), weights = std::move(weights)](const Vector& x) {
            Vector out = weights[0] * members[0].map()(x);
            for (std::size_t i = 1; i < members.size(); ++i) out += weights[i] * members[i].map()(x);
            return out;
          },
          family.dim(), label.str()};
}

MonotoneOperatorView resolvent_average(const WeightedFamily& resolvents) {
  return MonotoneOperatorView(average_maps(resolvents));
}

Matrix matrix_resolvent_average(std::span<const Matrix> matrices, std::span<const double> weights) {
  if (matrices.size() != weights.size()) throw InvalidArgument("matrix_resolvent_average: size mismatch");
  validate_weights(weights);
  const Eigen::Index n = matrices.front().rows();
  Matrix avg = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const Matrix& a = matrices[i];
    if (a.rows() != n || a.cols() != n) throw InvalidArgument("matrix_resolvent_average: shape mismatch");
    if (!a.allFinite()) throw InvalidArgument("matrix_resolvent_average: non-finite entry");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidArgument("matrix_resolvent_average: matrix is not symmetric");
    const double lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (lambda_min < -1e-10) throw InvalidArgument("matrix_resolvent_average: matrix is not PSD");
    avg += weights[i] * (Matrix::Identity(n, n) + a).ldlt().solve(Matrix::Identity(n, n));
  }
  // avg is symmetric positive definite with eigenvalues in (0, 1].
  Matrix out = avg.ldlt().solve(Matrix::Identity(n, n)) - Matrix::Identity(n, n);
  out = 0.5 * (out + out.transpose());
  return out;
}

ProxOracle prox_of_proximal_average(std::span<const ProxOracle> proxes, std::span<const double> weights) {
  if (proxes.size() != weights.size()) throw InvalidArgument("prox_of_proximal_average: size mismatch");
  validate_weights(weights);
  if (proxes.size() == 1) return proxes.front();
  std::vector<ProxOracle> members(proxes.begin(), proxes.end());
  std::vector<double> w(weights.begin(), weights.end());
  std::ostringstream label;
  label << "prox of proximal average of " << members.size() << " functions";
  return ProxOracle(
      [members = std::move(members), w = std::move(w)](const Vector& x) {
        Vector out = w[0] * members[0](x);
        for (std::size_t i = 1; i < members.size(); ++i) out += w[i] * members[i](x);
        return out;
      },
      label.str());
}

std::vector<Vector> sample_range(const VectorMap& t, const SampleRegion& probes) {
  return kernels::parallel::apply_map(t, probe_points(probes));
}

std::vector<Vector> sample_range(const FirmlyNonexpansiveMap& t, const SampleRegion& probes) {
  if (probes.dim() != t.dim()) throw InvalidArgument("sample_range: probe dimension mismatch");
  return sample_range(t.map(), probes);
}

GriddedSet sample_range_grid(const VectorMap& t, const SampleRegion& probes, double h, std::size_t levels) {
  if (levels == 0) throw InvalidArgument("sample_range_grid: need at least one level");
  const Vector center = 0.5 * (probes.lo + probes.hi);
  const Vector half = 0.5 * (probes.hi - probes.lo);
  GriddedSet out(h, probes.dim());
  for (std::size_t k = 0; k < levels; ++k) {
    const double scale = std::ldexp(1.0, -static_cast<int>(k));
    const SampleRegion level{center - scale * half, center + scale * half, probes.count, probes.seed + k};
    const auto range = sample_range(t, level);
    out = set_union(out, rasterize(range, probes.dim(), h));
  }
  return out.trimmed();
}

std::vector<Vector> sample_domain(const MonotoneOperatorView& a, const SampleRegion& probes) {
  return sample_range(a.resolvent(), probes);
}

std::vector<Vector> sample_operator_range(const MonotoneOperatorView& a, const SampleRegion& probes) {
  return sample_range(complement_map(a.resolvent()), probes);
}

}  // namespace opcalc
