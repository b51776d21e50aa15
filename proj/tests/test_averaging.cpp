#include "oracles.hpp"

#include "opcalc/averaging.hpp"
#include "opcalc/errors.hpp"
#include "opcalc/set_analysis.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FirmlyNonexpansiveMap interval(double lo, double hi) {
  return projection_map(std::make_shared<Box>(make_vector({lo}), make_vector({hi})));
}

FirmlyNonexpansiveMap interval_average() {
  return average_maps(WeightedFamily({interval(0, 1), interval(2, 3)}, {0.5, 0.5}));
}

GriddedSet interval_cells(double lo, double hi, double h) {
  std::vector<Vector> pts;
  for (double x = lo; x <= hi + 1e-12; x += h / 2) pts.push_back(make_vector({x}));
  return rasterize(pts, 1, h);
}

}  // namespace

TEST_CASE("weighted families validate weights and dimensions") {
  CHECK_THROWS_AS(validate_weights(std::vector<double>{0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(validate_weights(std::vector<double>{1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(validate_weights(std::vector<double>{1.5, -0.5}), InvalidArgument);
  CHECK_NOTHROW(validate_weights(std::vector<double>{0.25, 0.75}));
  CHECK_THROWS_AS(WeightedFamily({identity_map(1), identity_map(2)}, {0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(WeightedFamily({identity_map(1)}, {0.5, 0.5}), InvalidArgument);
}

TEST_CASE("average_maps") {
  const auto id = average_maps(WeightedFamily({identity_map(2), identity_map(2)}, {0.5, 0.5}));
  CHECK(id(make_vector({3, -4})) == make_vector({3, -4}));

  const auto t = interval_average();
  // Each distance minimized by brute force.
  const auto nearest = [](double x, double lo, double hi) {
    return oracle::minimize_1d([x](double u) { return std::abs(u - x); }, lo, hi, 10001);
  };
  for (const double x : {0.0, 5.0}) {
    const double expected = 0.5 * nearest(x, 0, 1) + 0.5 * nearest(x, 2, 3);
    CHECK(t(make_vector({x}))(0) == doctest::Approx(expected).epsilon(1e-8));
  }
  CHECK(t(make_vector({0}))(0) == 1.0);
  CHECK(t(make_vector({5}))(0) == 2.0);
  CHECK(check_firmly_nonexpansive(t, SampleRegion::cube(1, 10, 10000, 1)).passed);
}

TEST_CASE("resolvent_average") {
  const auto a = interval(0, 1);
  const auto same = resolvent_average(WeightedFamily({a, a}, {0.3, 0.7}));
  const MonotoneOperatorView base(a);
  for (const auto& x : uniform_sweep(-3, 4, 50)) {
    const auto p = same.minty_pair(x);
    const auto q = base.minty_pair(x);
    CHECK((p.point - q.point).norm() <= 1e-12);
    CHECK((p.value - q.value).norm() <= 1e-12);
  }

  // J_{A1} = Id (A1 = 0), J_{A2} = I/2 (A2 = I): J_A = 3/4 I, A = I/3.
  const auto half = LinearMonotoneOperator(Matrix::Identity(2, 2)).resolvent();
  const auto avg = resolvent_average(WeightedFamily({identity_map(2), half}, {0.5, 0.5}));
  for (const auto& x : oracle::random_points(20, 2, -5, 5, 2)) {
    const auto p = avg.minty_pair(x);
    CHECK((p.point - 0.75 * x).norm() <= 1e-14 * (1 + x.norm()));
    CHECK((p.value - 0.25 * x).norm() <= 1e-14 * (1 + x.norm()));
    CHECK((p.value - p.point / 3.0).norm() <= 1e-14 * (1 + x.norm()));
  }

  const auto cones = resolvent_average(WeightedFamily({interval(0, 1), interval(2, 3)}, {0.5, 0.5}));
  const auto dom = sample_domain(cones, {make_vector({-50}), make_vector({50}), 10000, 1});
  double lo = kInf, hi = -kInf;
  for (const auto& v : dom) {
    lo = std::min(lo, v(0));
    hi = std::max(hi, v(0));
  }
  CHECK(lo >= 1.0);
  CHECK(hi <= 2.0);
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE("matrix_resolvent_average") {
  Matrix a(2, 2);
  a << 2, 1, 1, 3;
  const std::vector<double> half{0.5, 0.5};
  CHECK((matrix_resolvent_average(std::vector<Matrix>{a, a}, half) - a).norm() <= 1e-12);

  const std::vector<Matrix> zi{Matrix::Zero(2, 2), Matrix::Identity(2, 2)};
  // Scalar formula: (0.5 / (1 + 0) + 0.5 / (1 + 1))^-1 - 1 = 1/3.
  const double scalar = 1.0 / (0.5 / 1.0 + 0.5 / 2.0) - 1.0;
  CHECK((matrix_resolvent_average(zi, half) - scalar * Matrix::Identity(2, 2)).norm() <= 1e-12);

  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1(0, 0) = 1;
  d2(1, 1) = 1;
  const Matrix r = matrix_resolvent_average(std::vector<Matrix>{d1, d2}, half);
  CHECK(r(0, 0) == doctest::Approx(scalar).epsilon(1e-12));
  CHECK(r(1, 1) == doctest::Approx(scalar).epsilon(1e-12));
  CHECK(std::abs(r(0, 1)) <= 1e-12);
  CHECK((r - r.transpose()).norm() <= 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(r).eigenvalues().minCoeff() >= -1e-9);

  Matrix bad(2, 2);
  bad << -1, 0, 0, 1;
  CHECK_THROWS_AS(matrix_resolvent_average(std::vector<Matrix>{bad, a}, half), InvalidArgument);
}

TEST_CASE("prox_of_proximal_average") {
  const ProxOracle single(std::make_shared<AbsFunction>());
  const auto one = prox_of_proximal_average(std::vector<ProxOracle>{single}, std::vector<double>{1.0});
  for (const auto& x : oracle::random_points(20, 2, -3, 3, 1)) CHECK(one(x) == single(x));

  const std::vector<ProxOracle> quads{ProxOracle(std::make_shared<QuadraticFunction>(1.0, make_vector({0}))),
                                      ProxOracle(std::make_shared<QuadraticFunction>(0.0, make_vector({0})))};
  const auto q = prox_of_proximal_average(quads, std::vector<double>{0.5, 0.5});
  for (const double x : {-4.0, 0.0, 1.0, 8.0}) CHECK(q(make_vector({x}))(0) == doctest::Approx(0.75 * x).epsilon(1e-15));

  const std::vector<ProxOracle> ind{
      ProxOracle(std::make_shared<IndicatorFunction>(std::make_shared<Box>(make_vector({0}), make_vector({1})))),
      ProxOracle(std::make_shared<IndicatorFunction>(std::make_shared<Box>(make_vector({2}), make_vector({3}))))};
  const auto pi = prox_of_proximal_average(ind, std::vector<double>{0.5, 0.5});
  const auto t = interval_average();
  for (const auto& x : uniform_sweep(-5, 8, 100)) CHECK(pi(x) == t(x));
  CHECK(check_firmly_nonexpansive(prox_map(q, 1), SampleRegion::cube(1, 10, 10000, 2)).passed);
}

TEST_CASE("property: averaged interval range is near-equal to the Minkowski combination") {
  const double h = 1e-3;
  const auto range = sample_range_grid(interval_average().map(), {make_vector({-50}), make_vector({50}), 200001, 1}, h);
  const GriddedSet target = interval_cells(1, 2, h);
  CHECK(hausdorff_cells(range, target) <= 2.0);
  CHECK(near_equal(range, target, 2).nearly_equal);

  const std::vector<GriddedSet> parts{interval_cells(0, 1, h), interval_cells(2, 3, h)};
  const auto mink = minkowski_combination(parts, std::vector<double>{0.5, 0.5});
  CHECK(near_equal(range, mink, 2).nearly_equal);
}

TEST_CASE("property: surjectivity propagates through the average") {
  // T = Id/2 + P_[0,1]/2 is onto: for a target y the probe solving T x = y is x = 2y - P(x),
  // i.e. x = 2y for y <= 0, x = 2y - 1 for y >= 1 and x = 2y - x on [0,1] (x = y).
  const auto t = average_maps(WeightedFamily({identity_map(1), interval(0, 1)}, {0.5, 0.5}));
  const auto preimage = [](double y) { return y <= 0 ? 2 * y : (y >= 1 ? 2 * y - 1 : y); };
  const double lo = -7, hi = 9;
  const auto probes = SampleRegion{make_vector({preimage(lo)}), make_vector({preimage(hi)}), 20001, 1};
  const double h = 0.01;
  const auto range = sample_range_grid(t.map(), probes, h);
  std::vector<Vector> target_pts;
  for (double y = lo; y <= hi + 1e-12; y += h / 2) target_pts.push_back(make_vector({y}));
  const auto target = rasterize(target_pts, 1, h);
  CHECK(hausdorff_cells(range, target) <= 1.0);
  for (const double y : {lo, -1.0, 0.3, 1.0, hi}) CHECK(t(make_vector({preimage(y)}))(0) == doctest::Approx(y).epsilon(1e-14));
}
