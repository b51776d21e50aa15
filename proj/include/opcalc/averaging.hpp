#pragma once

#include "opcalc/grid.hpp"
#include "opcalc/operators.hpp"
#include "opcalc/prox.hpp"
#include "opcalc/sampling.hpp"

#include <span>
#include <vector>

namespace opcalc {

/// Firmly nonexpansive maps of one dimension with weights lambda_i > 0 summing to 1 (1e-12).
class WeightedFamily {
 public:
  WeightedFamily(std::vector<FirmlyNonexpansiveMap> members, std::vector<double> weights);

  const std::vector<FirmlyNonexpansiveMap>& members() const { return members_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t dim() const { return members_.front().dim(); }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<FirmlyNonexpansiveMap> members_;
  std::vector<double> weights_;
};

/// Throws InvalidArgument unless the weights are positive and sum to 1 within 1e-12.
void validate_weights(std::span<const double> weights);

/// x -> sum_i lambda_i T_i x (firmly nonexpansive again).
FirmlyNonexpansiveMap average_maps(const WeightedFamily& family);

/// The operator A with J_A = sum_i lambda_i J_{A_i}; A itself is never formed.
MonotoneOperatorView resolvent_average(const WeightedFamily& resolvents);

/// (sum_i lambda_i (I + A_i)^-1)^-1 - I for symmetric PSD A_i (PSD within 1e-10).
Matrix matrix_resolvent_average(std::span<const Matrix> matrices, std::span<const double> weights);

/// prox of the proximal average: x -> sum_i lambda_i prox_i(x).
ProxOracle prox_of_proximal_average(std::span<const ProxOracle> proxes, std::span<const double> weights);

inline constexpr double kDefaultRangeWindow = 50.0;
inline constexpr std::size_t kDefaultRangeProbes = 10000;

/// T applied to the default probe set of the region (1-D sweep, Halton otherwise).
std::vector<Vector> sample_range(const VectorMap& t, const SampleRegion& probes);
std::vector<Vector> sample_range(const FirmlyNonexpansiveMap& t, const SampleRegion& probes);

/// ran J_A = dom A and ran (Id - J_A) = ran A.
/// Range of t rasterized at cell size h without keeping the samples. Level k probes the box
/// shrunk by 2^k about the center of `probes` with probes.count points, so maps that contract
/// far from the center still get dense range samples near it. levels = 1 is plain sampling.
GriddedSet sample_range_grid(const VectorMap& t, const SampleRegion& probes, double h, std::size_t levels = 1);

std::vector<Vector> sample_domain(const MonotoneOperatorView& a, const SampleRegion& probes);
std::vector<Vector> sample_operator_range(const MonotoneOperatorView& a, const SampleRegion& probes);

}  // namespace opcalc
