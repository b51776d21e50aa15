// Every OpenMP kernel must reproduce its serial reference bit for bit.

#include "oracles.hpp"

#include "opcalc/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;
namespace serial = opcalc::kernels::serial;
namespace parallel = opcalc::kernels::parallel;

namespace {

GridFrame frame_2d(std::int64_t nx, std::int64_t ny) { return GridFrame::spanning({-3, -2}, {nx - 4, ny - 3}); }

std::vector<std::uint8_t> random_mask(std::size_t n, std::uint64_t seed, int density = 2) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out(n);
  for (auto& v : out) v = rng() % density == 0 ? 1 : 0;
  return out;
}

}  // namespace

TEST_CASE("apply_map") {
  const VectorMap f = [](const Vector& x) { return Vector(x.array().sin() + 0.5 * x.array()); };
  const auto pts = oracle::random_points(5000, 3, -4, 4, 1);
  const auto a = serial::apply_map(f, pts);
  const auto b = parallel::apply_map(f, pts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("firm_violations") {
  const auto xs = oracle::random_points(4000, 2, -5, 5, 2);
  const auto ys = oracle::random_points(4000, 2, -5, 5, 3);
  const VectorMap t = [](const Vector& x) { return Vector(1.3 * x.array().tanh()); };
  const auto txs = serial::apply_map(t, xs);
  const auto tys = serial::apply_map(t, ys);
  const auto a = serial::firm_violations(xs, txs, ys, tys);
  const auto b = parallel::firm_violations(xs, txs, ys, tys);
  CHECK(a.direct == b.direct);
  CHECK(a.complement == b.complement);
  CHECK(a.reflected == b.reflected);
  CHECK(a.direct > 0.0);  // 1.3 tanh is not firmly nonexpansive

  const auto empty = parallel::firm_violations({}, {}, {}, {});
  CHECK(std::isinf(empty.direct));
}

TEST_CASE("fitzpatrick_max") {
  const auto pts = oracle::random_points(3000, 3, -2, 2, 4);
  const auto vals = oracle::random_points(3000, 3, -2, 2, 5);
  const Vector x = make_vector({0.3, -1, 2}), xs = make_vector({1, 1, -0.5});
  CHECK(serial::fitzpatrick_max(pts, vals, x, xs) == parallel::fitzpatrick_max(pts, vals, x, xs));
  CHECK(std::isinf(parallel::fitzpatrick_max({}, {}, x, xs)));
}

TEST_CASE("rayleigh_min") {
  Matrix m(3, 3);
  m << 2, 1, 0, -1, 1, 0.5, 0, -0.5, 3;
  const auto dirs = oracle::random_points(5000, 3, -1, 1, 6);
  CHECK(serial::rayleigh_min(m, dirs, 1e-12) == parallel::rayleigh_min(m, dirs, 1e-12));
  CHECK(std::isinf(parallel::rayleigh_min(Matrix::Zero(3, 3), dirs, 1e-12)));
}

TEST_CASE("minkowski_mark") {
  const auto a_pts = oracle::random_points(300, 2, -10, 10, 7);
  const auto b_pts = oracle::random_points(200, 2, -10, 10, 8);
  std::vector<double> a, b;
  for (const auto& p : a_pts) a.insert(a.end(), p.data(), p.data() + 2);
  for (const auto& p : b_pts) b.insert(b.end(), p.data(), p.data() + 2);
  const GridFrame frame = GridFrame::spanning({-21, -21}, {21, 21});
  std::vector<std::uint8_t> s(frame.size(), 0), p(frame.size(), 0);
  serial::minkowski_mark(a, b, 2, frame, s);
  parallel::minkowski_mark(a, b, 2, frame, p);
  CHECK(s == p);
  CHECK(std::count(s.begin(), s.end(), 1) > 0);
}

TEST_CASE("axis_filter") {
  const GridFrame frame = frame_2d(37, 23);
  const auto in = random_mask(frame.size(), 9);
  for (std::size_t axis = 0; axis < 2; ++axis) {
    for (const bool dilate : {true, false}) {
      std::vector<std::uint8_t> s(frame.size()), p(frame.size());
      serial::axis_filter(frame, in, s, axis, dilate);
      parallel::axis_filter(frame, in, p, axis, dilate);
      CHECK(s == p);
    }
  }
}

TEST_CASE("squared_edt_axis") {
  const GridFrame frame = frame_2d(41, 29);
  const auto mask = random_mask(frame.size(), 10, 17);
  std::vector<double> s(frame.size()), p(frame.size());
  for (std::size_t i = 0; i < mask.size(); ++i) s[i] = p[i] = mask[i] ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t axis = 0; axis < 2; ++axis) {
    serial::squared_edt_axis(frame, s, axis);
    parallel::squared_edt_axis(frame, p, axis);
    CHECK(s == p);
  }
  // After both passes the values are exact squared distances.
  std::vector<std::int64_t> c(2), q(2);
  for (std::size_t i = 0; i < s.size(); i += 13) {
    frame.unflat(i, c);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mask.size(); ++j) {
      if (!mask[j]) continue;
      frame.unflat(j, q);
      best = std::min(best, double((c[0] - q[0]) * (c[0] - q[0]) + (c[1] - q[1]) * (c[1] - q[1])));
    }
    CHECK(s[i] == best);
  }
}

TEST_CASE("mark_halfspaces") {
  const GridFrame frame = GridFrame::spanning({-10, -10, -10}, {10, 10, 10});
  std::vector<kernels::HalfSpace> faces{{{1, 1, 1}, 12}, {{-1, 0, 0}, 4}, {{0, -2, 1}, 9}, {{0, 0, -1}, 7}};
  std::vector<std::uint8_t> s(frame.size(), 0), p(frame.size(), 0);
  serial::mark_halfspaces(frame, faces, s);
  parallel::mark_halfspaces(frame, faces, p);
  CHECK(s == p);
  CHECK(std::count(s.begin(), s.end(), 1) > 0);
}

TEST_CASE("max_masked") {
  std::vector<double> values(10000);
  std::mt19937_64 rng(11);
  for (auto& v : values) v = static_cast<double>(rng() % 1000);  // many ties
  const auto mask = random_mask(values.size(), 12);
  std::size_t ia = 0, ib = 0;
  CHECK(serial::max_masked(values, mask, &ia) == parallel::max_masked(values, mask, &ib));
  CHECK(ia == ib);
  const std::vector<std::uint8_t> none(values.size(), 0);
  CHECK(std::isinf(parallel::max_masked(values, none, &ib)));
  CHECK(ib == values.size());
}

TEST_CASE("thread_count is positive") { CHECK(kernels::thread_count() >= 1); }
