#pragma once

// Independent reference computations for the tests. Nothing here calls into the library
// except for the plain Vector type, so a bug in a module cannot hide behind its own oracle.

#include "opcalc/vector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

/// Bisection for an increasing g on [lo, hi] with g(lo) < 0 < g(hi).
inline double bisect(const std::function<double(double)>& g, double lo, double hi, double tol = 1e-14) {
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// argmin of a 1-D function: dense grid scan then golden-section polish around the best node.
inline double minimize_1d(const std::function<double(double)>& f, double lo, double hi, int nodes = 20001) {
  double best = lo;
  double best_value = f(lo);
  for (int i = 1; i < nodes; ++i) {
    const double t = lo + (hi - lo) * i / (nodes - 1);
    if (const double v = f(t); v < best_value) {
      best_value = v;
      best = t;
    }
  }
  const double step = (hi - lo) / (nodes - 1);
  double a = std::max(lo, best - step);
  double b = std::min(hi, best + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 200; ++i) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    (f(c) < f(d) ? b : a) = (f(c) < f(d) ? d : c);
  }
  return 0.5 * (a + b);
}

/// Brute-force nearest point of a box on a grid of `nodes` per axis (2-D).
inline std::array<double, 2> nearest_in_box_grid(double x, double y, double x0, double x1, double y0, double y1,
                                                 int nodes = 301) {
  std::array<double, 2> best{x0, y0};
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      const double u = x0 + (x1 - x0) * i / (nodes - 1);
      const double v = y0 + (y1 - y0) * j / (nodes - 1);
      const double d = (u - x) * (u - x) + (v - y) * (v - y);
      if (d < best_d) {
        best_d = d;
        best = {u, v};
      }
    }
  }
  return best;
}

/// Solves a 2x2 system by Cramer's rule.
inline std::array<double, 2> solve2(double a, double b, double c, double d, double r0, double r1) {
  const double det = a * d - b * c;
  return {(r0 * d - b * r1) / det, (a * r1 - c * r0) / det};
}

using Cell2 = std::pair<std::int64_t, std::int64_t>;

/// Jarvis march (gift wrapping) on integer points; counter-clockwise, collinear points dropped.
inline std::vector<Cell2> gift_wrap(std::vector<Cell2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  const auto cross = [](const Cell2& o, const Cell2& a, const Cell2& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  const auto dist2 = [](const Cell2& a, const Cell2& b) {
    const auto dx = a.first - b.first, dy = a.second - b.second;
    return dx * dx + dy * dy;
  };
  std::vector<Cell2> hull;
  Cell2 current = pts.front();  // lowest x, then lowest y: on the hull
  do {
    hull.push_back(current);
    Cell2 next = pts.front() == current ? pts.back() : pts.front();
    for (const auto& p : pts) {
      if (p == current) continue;
      const auto c = cross(current, next, p);
      if (c < 0 || (c == 0 && dist2(current, p) > dist2(current, next))) next = p;
    }
    current = next;
  } while (current != hull.front() && hull.size() <= pts.size());
  return hull;
}

/// Integer points inside or on a counter-clockwise polygon.
inline bool in_polygon(const std::vector<Cell2>& hull, const Cell2& p) {
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    if ((b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first) < 0) return false;
  }
  return true;
}

/// 3x3 binary morphology on a dense image (rows x cols, outside = empty).
using Image = std::vector<std::vector<int>>;

inline Image morph(const Image& in, bool dilate) {
  const int rows = static_cast<int>(in.size());
  const int cols = static_cast<int>(in.front().size());
  Image out(rows, std::vector<int>(cols, 0));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      bool any = false, all = true;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          const int v = (rr >= 0 && rr < rows && cc >= 0 && cc < cols) ? in[rr][cc] : 0;
          any = any || v;
          all = all && v;
        }
      }
      out[r][c] = dilate ? any : all;
    }
  }
  return out;
}

/// Brute-force Hausdorff distance between two finite point sets.
template <class P>
double hausdorff(const std::vector<P>& a, const std::vector<P>& b, const std::function<double(const P&, const P&)>& d) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  const auto directed = [&](const std::vector<P>& x, const std::vector<P>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, d(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Rank of a point cloud from pairwise differences: Gram-Schmidt with an absolute threshold.
inline int difference_rank(const std::vector<opcalc::Vector>& pts, double threshold) {
  std::vector<opcalc::Vector> basis;
  for (const auto& p : pts) {
    opcalc::Vector v = p - pts.front();
    for (const auto& b : basis) v -= v.dot(b) * b;
    if (v.norm() > threshold) basis.push_back(v.normalized());
  }
  return static_cast<int>(basis.size());
}

inline std::vector<opcalc::Vector> random_points(std::size_t n, std::size_t dim, double lo, double hi,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<opcalc::Vector> out;
  for (std::size_t i = 0; i < n; ++i) {
    opcalc::Vector v(static_cast<Eigen::Index>(dim));
    for (auto& c : v) c = u(rng);
    out.push_back(v);
  }
  return out;
}

}  // namespace oracle
