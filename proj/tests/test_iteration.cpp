#include "oracles.hpp"

#include "opcalc/averaging.hpp"
#include "opcalc/errors.hpp"
#include "opcalc/iteration.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace opcalc;

namespace {

FirmlyNonexpansiveMap interval(double lo, double hi) {
  return projection_map(std::make_shared<Box>(make_vector({lo}), make_vector({hi})));
}

FirmlyNonexpansiveMap kool_map() {
  const auto line = std::make_shared<AffineSet>(make_vector({0, 0}), std::vector<Vector>{make_vector({1, 0})});
  const auto epi = std::make_shared<Epigraph>(EpigraphSpec::exp());
  return average_maps(WeightedFamily({projection_map(line), projection_map(epi)}, {0.5, 0.5}));
}

void check_residuals_nonincreasing(const IterationTrace& trace) {
  CHECK(trace.worst_residual_increase() <= 1e-12);
  for (std::size_t i = 1; i < trace.residuals.size(); ++i) {
    if (trace.residuals[i] > trace.residuals[i - 1] + 1e-12) FAIL("residual increased at step " << i);
  }
}

}  // namespace

TEST_CASE("iterate: a projection is idempotent") {
  const auto trace = iterate(interval(0, 1), make_vector({5}), 100);
  REQUIRE(trace.residuals.size() >= 2);
  CHECK(trace.residuals[0] == 4.0);
  CHECK(trace.residuals[1] == 0.0);
  CHECK(trace.last(0) == 1.0);
  const auto d = diagnose(trace, interval(0, 1));
  CHECK(d.verdict == Verdict::ConvergedToFixedPoint);
  REQUIRE(d.fixed_point.has_value());
  CHECK((*d.fixed_point)(0) == 1.0);
  CHECK_THROWS_AS(iterate(interval(0, 1), make_vector({5}), 0), InvalidArgument);
}

TEST_CASE("iterate: the interval average converges to 1.5") {
  const auto t = average_maps(WeightedFamily({interval(0, 1), interval(2, 3)}, {0.5, 0.5}));
  // Brute-force scan for x = T x.
  double best = 0, best_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400000; ++i) {
    const double x = -1.0 + 4.0 * i / 400000;
    const double gap = std::abs(x - t(make_vector({x}))(0));
    if (gap < best_gap) {
      best_gap = gap;
      best = x;
    }
  }
  CHECK(best == doctest::Approx(1.5).epsilon(1e-5));

  const auto trace = iterate(t, make_vector({0}), 10000);
  check_residuals_nonincreasing(trace);
  const auto d = diagnose(trace, t);
  CHECK(d.verdict == Verdict::ConvergedToFixedPoint);
  CHECK(std::abs((*d.fixed_point)(0) - 1.5) <= 1e-8);
  CHECK(d.fixed_point_residual <= 1e-10);
}

TEST_CASE("iterate: the Kool average is asymptotically regular but diverges") {
  const auto t = kool_map();
  const auto trace = iterate(t, make_vector({0, 2}), 100000);
  check_residuals_nonincreasing(trace);
  CHECK(trace.steps_taken == 100000);
  CHECK(trace.residuals.back() <= 1e-2);
  CHECK(trace.last(0) < -5.4);
  // First coordinate decreasing along the stored iterates.
  for (std::size_t i = 1; i < trace.iterates.size(); ++i) CHECK(trace.iterates[i](0) <= trace.iterates[i - 1](0));
  DiagnoseThresholds th;
  th.norm_escape = 5.0;
  CHECK(diagnose(trace, t, th).verdict == Verdict::AsymptoticallyRegularDivergent);
}

TEST_CASE("diagnose: a translation is not asymptotically regular") {
  const auto t = translation_map(make_vector({1}));
  const auto trace = iterate(t, make_vector({0}), 1000);
  for (const double r : trace.residuals) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(diagnose(trace, t).verdict == Verdict::NotAsymptoticallyRegular);
}

TEST_CASE("iterate rejects non-finite iterates") {
  const FirmlyNonexpansiveMap blow([](const Vector& x) { return Vector(x * 1e300); }, 1, "blow-up");
  CHECK_THROWS_AS(iterate(blow, make_vector({10}), 10), NumericalFailure);
}

TEST_CASE("trace thinning keeps the dense scalar series") {
  const auto t = translation_map(make_vector({1e-3, 0}));
  const auto trace = iterate(t, make_vector({0, 0}), 250000);
  CHECK(trace.residuals.size() >= 250000);
  CHECK(trace.norms.size() >= 250000);
  CHECK(trace.iterates.size() <= kMaxStoredIterates + 1);
  CHECK(trace.iterate_steps.back() == trace.steps_taken);
  CHECK(trace.iterates.back() == trace.last);
}

TEST_CASE("write_trace_csv") {
  const auto trace = iterate(interval(0, 1), make_vector({5}), 10);
  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "step,residual,norm,x0");
  CHECK(first == "0,4,5,5");
}

TEST_CASE("check_resolvent_regularity") {
  const std::vector<Vector> probes = uniform_sweep(-5, 5, 101);

  // A = d(x -> x): J_A is translation by -1 and 1 is the only value of A.
  const auto lin = prox_map(ProxOracle(std::make_shared<LinearFunction>(make_vector({1}))), 1);
  const auto r1 = check_resolvent_regularity(MonotoneOperatorView(lin), probes);
  CHECK(r1.min_sample_residual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.diagnosis.verdict == Verdict::NotAsymptoticallyRegular);
  CHECK_FALSE(r1.zero_in_range_closure);
  CHECK(r1.consistent);

  const auto r2 = check_resolvent_regularity(MonotoneOperatorView(interval(0, 1)), probes);
  CHECK(r2.min_sample_residual == 0.0);
  CHECK(r2.diagnosis.verdict == Verdict::ConvergedToFixedPoint);
  CHECK(r2.consistent);

  // A = I/3, J_A = 3/4 I.
  const auto third = LinearMonotoneOperator(Matrix::Identity(1, 1) / 3.0).resolvent();
  const auto r3 = check_resolvent_regularity(MonotoneOperatorView(third), probes);
  CHECK(r3.zero_in_range_closure);
  CHECK(r3.diagnosis.verdict == Verdict::ConvergedToFixedPoint);
  CHECK(std::abs((*r3.diagnosis.fixed_point)(0)) <= 1e-9);
  CHECK(r3.consistent);
}

TEST_CASE("property: averages of projections onto disjoint boxes stay asymptotically regular") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5, 5), w(0.2, 2);
  for (int k = 0; k < 20; ++k) {
    const Vector lo1 = make_vector({u(rng), u(rng)});
    const Vector hi1 = lo1 + make_vector({w(rng), w(rng)});
    // Second box to the right of the first along x: disjoint by construction.
    const Vector lo2 = make_vector({hi1(0) + w(rng), u(rng)});
    const Vector hi2 = lo2 + make_vector({w(rng), w(rng)});
    const auto p1 = projection_map(std::make_shared<Box>(lo1, hi1));
    const auto p2 = projection_map(std::make_shared<Box>(lo2, hi2));
    const auto t = average_maps(WeightedFamily({p1, p2}, {0.5, 0.5}));
    const auto trace = iterate(t, make_vector({u(rng), u(rng)}), 10000);
    check_residuals_nonincreasing(trace);
    const auto d = diagnose(trace, t);
    CHECK(d.verdict != Verdict::NotAsymptoticallyRegular);
    CHECK(d.verdict == Verdict::ConvergedToFixedPoint);
    const Vector p = *d.fixed_point;
    CHECK((p - 0.5 * (p1(p) + p2(p))).norm() <= 1e-8);
    CHECK((p - t(p)).norm() <= 1e-10);
  }
}
