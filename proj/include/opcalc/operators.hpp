#pragma once

#include "opcalc/convex_sets.hpp"
#include "opcalc/prox.hpp"
#include "opcalc/sampling.hpp"
#include "opcalc/vector.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace opcalc {

/// Single-valued, full-domain map T with <x-y, Tx-Ty> >= |Tx-Ty|^2. By Minty's theorem
/// every such T is the resolvent J_A = (Id + A)^-1 of a unique maximally monotone A, which is
/// how the toolkit represents operators. Evaluation rejects wrong dimensions and non-finite
/// input. Copies share the underlying callable.
class FirmlyNonexpansiveMap {
 public:
  FirmlyNonexpansiveMap(VectorMap map, std::size_t dim, std::string descriptor);

  Vector operator()(const Vector& x) const;
  std::size_t dim() const { return dim_; }
  const std::string& descriptor() const { return descriptor_; }
  /// The bare callable (no argument checks), for kernels.
  const VectorMap& map() const { return map_; }

 private:
  VectorMap map_;
  std::size_t dim_;
  std::string descriptor_;
};

FirmlyNonexpansiveMap identity_map(std::size_t dim);
FirmlyNonexpansiveMap projection_map(ConvexSetPtr set);
FirmlyNonexpansiveMap prox_map(ProxOracle prox, std::size_t dim);
/// x -> x + v, the resolvent of the constant operator A = -v.
FirmlyNonexpansiveMap translation_map(Vector v);
/// Id - T.
FirmlyNonexpansiveMap complement_map(const FirmlyNonexpansiveMap& t);

struct GraphPair {
  Vector point;  // a
  Vector value;  // a* in A(a)
};

/// Finite subset of gr A.
struct GraphSample {
  std::vector<GraphPair> pairs;

  /// max over pairs of -<x_i - x_j, x*_i - x*_j>; <= 0 for a monotone sample.
  double worst_monotonicity_violation() const;
};

/// A maximally monotone A seen through J_A; J_{A^-1} is x -> x - J_A x.
class MonotoneOperatorView {
 public:
  explicit MonotoneOperatorView(FirmlyNonexpansiveMap resolvent);

  const FirmlyNonexpansiveMap& resolvent() const { return resolvent_; }
  std::size_t dim() const { return resolvent_.dim(); }
  Vector inverse_resolvent(const Vector& x) const;
  /// Minty parametrization x -> (J_A x, x - J_A x), a point of gr A.
  GraphPair minty_pair(const Vector& x) const;
  /// The view of A^-1 (resolvent and inverse resolvent swapped).
  MonotoneOperatorView inverse() const;

 private:
  FirmlyNonexpansiveMap resolvent_;
};

/// x -> Mx with a positive semidefinite symmetric part.
class LinearMonotoneOperator {
 public:
  /// Throws InvalidArgument unless M is square, finite and
  /// lambda_min((M + M^T)/2) >= -1e-10.
  explicit LinearMonotoneOperator(Matrix m);

  const Matrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  /// J = (I + M)^-1 with the factorization computed once and shared.
  FirmlyNonexpansiveMap resolvent() const;

  static LinearMonotoneOperator rotation(double angle);

 private:
  Matrix m_;
};

/// Solves (I + M)u = x.
Vector resolvent_of_linear(const LinearMonotoneOperator& m, const Vector& x);

GraphSample minty_graph_sample(const MonotoneOperatorView& a, std::span<const Vector> probes);

/// max over sampled (a, a*) of <x, a*> + <a, x*> - <a, a*>: a lower bound of F_A(x, x*).
double fitzpatrick_estimate(const GraphSample& g, const Vector& x, const Vector& xstar);

inline constexpr std::size_t kDefaultGammaSamples = 100000;

/// min <x, Mx> / |Mx|^2 over deterministic unit directions plus the eigenvectors of the
/// symmetric part (directions with |Mx| <= 1e-12 are skipped). +inf when M vanishes on all of
/// them. gamma > 0 certifies rectangularity; values near 0 signal its absence.
double rectangularity_gamma_estimate(const LinearMonotoneOperator& m,
                                     std::size_t n_samples = kDefaultGammaSamples);

inline constexpr double kFirmTolerance = 1e-9;

struct FirmnessReport {
  double direct = 0.0;      // worst |Tx-Ty|^2 - <x-y, Tx-Ty>
  double complement = 0.0;  // same for Id - T
  double reflected = 0.0;   // worst |(2T-Id)x - (2T-Id)y| - |x-y|
  std::size_t pairs = 0;
  double tolerance = kFirmTolerance;
  bool passed = false;

  double worst() const;
};

/// Samples `region.count` pairs uniformly from the region and reports all three equivalent
/// firm-nonexpansiveness inequalities. Works for any map, firmly nonexpansive or not.
FirmnessReport check_firmly_nonexpansive(const VectorMap& t, const SampleRegion& region,
                                         double tolerance = kFirmTolerance);
FirmnessReport check_firmly_nonexpansive(const FirmlyNonexpansiveMap& t, const SampleRegion& region,
                                         double tolerance = kFirmTolerance);

/// The sampling region used for set-based maps: the hint box inflated by 3, unbounded axes
/// truncated to [-window, window].
SampleRegion region_around(const HintBox& box, std::size_t count, std::uint64_t seed = 1,
                           double window = 10.0);

}  // namespace opcalc
