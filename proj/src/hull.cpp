#include "opcalc/errors.hpp"
#include "opcalc/kernels.hpp"
#include "opcalc/set_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>
#include <utility>

namespace opcalc {

namespace {

using P3 = std::array<std::int64_t, 3>;

P3 sub(const P3& a, const P3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
P3 cross(const P3& a, const P3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
std::int64_t dot(const P3& a, const P3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
bool is_zero(const P3& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

P3 point(const std::vector<std::int64_t>& cells, std::size_t i, std::size_t dim) {
  P3 p{0, 0, 0};
  for (std::size_t k = 0; k < dim; ++k) p[k] = cells[i * dim + k];
  return p;
}

// Indices of up to four affinely independent points; the size is the affine dimension + 1.
std::vector<std::size_t> independent_points(const std::vector<P3>& pts) {
  std::vector<std::size_t> idx{0};
  std::size_t i = 1;
  for (; i < pts.size(); ++i)
    if (pts[i] != pts[0]) break;
  if (i == pts.size()) return idx;
  idx.push_back(i);
  const P3 u = sub(pts[i], pts[0]);
  std::size_t j = 1;
  for (; j < pts.size(); ++j)
    if (!is_zero(cross(u, sub(pts[j], pts[0])))) break;
  if (j == pts.size()) return idx;
  idx.push_back(j);
  const P3 n = cross(u, sub(pts[j], pts[0]));
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (dot(n, sub(pts[k], pts[0])) != 0) {
      idx.push_back(k);
      break;
    }
  return idx;
}

using P2 = std::array<std::int64_t, 2>;

std::int64_t cross2(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Counter-clockwise hull without collinear vertices; needs three non-collinear points.
std::vector<P2> monotone_chain(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<P2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<kernels::HalfSpace> polygon_faces(const std::vector<P2>& hull) {
  std::vector<kernels::HalfSpace> faces;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const P2& a = hull[i];
    const P2& b = hull[(i + 1) % hull.size()];
    const std::int64_t ex = b[0] - a[0], ey = b[1] - a[1];
    faces.push_back({{ey, -ex}, ey * a[0] - ex * a[1]});
  }
  return faces;
}

// Points extreme on every axis-parallel lattice line through them; hull vertices are among them.
std::vector<std::size_t> line_extremes(const GriddedSet& g) {
  const GridFrame& f = g.frame();
  const std::size_t d = g.dim();
  const auto& occ = g.occupancy();
  std::vector<std::uint8_t> keep(occ.size(), 0);
  for (std::size_t i = 0; i < occ.size(); ++i) keep[i] = occ[i];
  for (std::size_t axis = 0; axis < d; ++axis) {
    const std::size_t stride = f.stride(axis);
    const auto len = static_cast<std::size_t>(f.extent[axis]);
    for (std::size_t base = 0; base < occ.size(); ++base) {
      if ((base / stride) % len != 0) continue;  // only line starts
      std::size_t first = len, last = len;
      for (std::size_t t = 0; t < len; ++t)
        if (occ[base + t * stride]) {
          if (first == len) first = t;
          last = t;
        }
      if (first == len) continue;
      for (std::size_t t = first + 1; t < last; ++t) keep[base + t * stride] = 0;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) out.push_back(i);
  return out;
}

struct Face {
  std::array<std::size_t, 3> v;
  P3 normal;
  std::int64_t offset;
  bool alive = true;
};

Face make_face(const std::vector<P3>& pts, std::size_t a, std::size_t b, std::size_t c) {
  const P3 n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
  return {{a, b, c}, n, dot(n, pts[a]), true};
}

// Incremental hull of a full-dimensional 3-D point set with exact integer predicates.
std::vector<kernels::HalfSpace> polytope_faces(std::vector<P3> pts) {
  const auto seed = independent_points(pts);
  for (std::size_t k = 0; k < 4; ++k) std::swap(pts[k], pts[seed[k]]);
  std::mt19937_64 rng(7);
  std::shuffle(pts.begin() + 4, pts.end(), rng);

  std::vector<Face> faces;
  const P3 centroid4{pts[0][0] + pts[1][0] + pts[2][0] + pts[3][0], pts[0][1] + pts[1][1] + pts[2][1] + pts[3][1],
                     pts[0][2] + pts[1][2] + pts[2][2] + pts[3][2]};
  const std::array<std::array<std::size_t, 3>, 4> tet{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (auto t : tet) {
    Face f = make_face(pts, t[0], t[1], t[2]);
    // Orient outward: 4 * offset must exceed normal . (sum of the four vertices).
    if (dot(f.normal, centroid4) > 4 * f.offset) f = make_face(pts, t[0], t[2], t[1]);
    faces.push_back(f);
  }

  for (std::size_t p = 4; p < pts.size(); ++p) {
    std::set<std::pair<std::size_t, std::size_t>> edges;
    bool any = false;
    for (auto& f : faces) {
      if (!f.alive || dot(f.normal, pts[p]) <= f.offset) continue;
      any = true;
      f.alive = false;
      for (std::size_t e = 0; e < 3; ++e) edges.insert({f.v[e], f.v[(e + 1) % 3]});
    }
    if (!any) continue;
    for (const auto& [u, v] : edges)
      if (!edges.count({v, u})) faces.push_back(make_face(pts, u, v, p));
    std::erase_if(faces, [](const Face& f) { return !f.alive; });
  }

  std::vector<kernels::HalfSpace> out;
  for (const auto& f : faces) out.push_back({{f.normal[0], f.normal[1], f.normal[2]}, f.offset});
  return out;
}

std::int64_t round_div(double num) { return static_cast<std::int64_t>(std::floor(num + 0.5)); }

// Segment between the extreme points along the dominant axis, one cell per step.
void mark_segment(GriddedSet& out, const P3& a, const P3& b, std::size_t dim) {
  const P3 d = sub(b, a);
  std::size_t axis = 0;
  for (std::size_t k = 1; k < dim; ++k)
    if (std::abs(d[k]) > std::abs(d[axis])) axis = k;
  const std::int64_t steps = std::abs(d[axis]);
  CellIndex c(dim);
  for (std::int64_t s = 0; s <= steps; ++s) {
    for (std::size_t k = 0; k < dim; ++k)
      c[k] = a[k] + round_div(static_cast<double>(d[k]) * static_cast<double>(s) / static_cast<double>(steps));
    out.set(c);
  }
}

GriddedSet hull_segment(const GriddedSet& g, const std::vector<P3>& pts, const std::vector<std::size_t>& seed) {
  const P3 u = sub(pts[seed[1]], pts[seed[0]]);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (dot(u, pts[i]) < dot(u, pts[lo])) lo = i;
    if (dot(u, pts[i]) > dot(u, pts[hi])) hi = i;
  }
  GriddedSet out = g;
  mark_segment(out, pts[lo], pts[hi], g.dim());
  return out;
}

GriddedSet hull_polygon(const GriddedSet& g, const std::vector<P3>& pts) {
  std::vector<P2> flat;
  flat.reserve(pts.size());
  for (const auto& p : pts) flat.push_back({p[0], p[1]});
  const auto faces = polygon_faces(monotone_chain(std::move(flat)));
  GriddedSet out = g;
  kernels::parallel::mark_halfspaces(out.frame(), faces, out.occupancy());
  return out;
}

// Planar set in 3-D: rasterize the polygon in the coordinate plane the flat projects onto
// best, then lift each lattice point back to the nearest cell on the flat.
GriddedSet hull_planar(const GriddedSet& g, const std::vector<P3>& pts, const std::vector<std::size_t>& seed) {
  const P3 n = cross(sub(pts[seed[1]], pts[seed[0]]), sub(pts[seed[2]], pts[seed[0]]));
  std::size_t drop = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(n[k]) > std::abs(n[drop])) drop = k;
  std::array<std::size_t, 2> keep{};
  for (std::size_t k = 0, j = 0; k < 3; ++k)
    if (k != drop) keep[j++] = k;

  std::vector<P2> flat;
  flat.reserve(pts.size());
  for (const auto& p : pts) flat.push_back({p[keep[0]], p[keep[1]]});
  const auto faces = polygon_faces(monotone_chain(flat));

  const GridFrame& f3 = g.frame();
  GridFrame f2{{f3.lo[keep[0]], f3.lo[keep[1]]}, {f3.extent[keep[0]], f3.extent[keep[1]]}};
  std::vector<std::uint8_t> mask(f2.size(), 0);
  kernels::parallel::mark_halfspaces(f2, faces, mask);

  GriddedSet out = g;
  const std::int64_t offset = dot(n, pts[seed[0]]);
  CellIndex c2(2), c3(3);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    f2.unflat(i, c2);
    c3[keep[0]] = c2[0];
    c3[keep[1]] = c2[1];
    const double rest = static_cast<double>(offset - n[keep[0]] * c2[0] - n[keep[1]] * c2[1]);
    c3[drop] = round_div(rest / static_cast<double>(n[drop]));
    out.set(c3);
  }
  return out;
}

}  // namespace

GriddedSet convex_hull_grid(const GriddedSet& g) {
  const std::size_t d = g.dim();
  if (d > 3) throw Unsupported("convex_hull_grid: only dimensions up to 3 are supported");
  const GriddedSet src = g.trimmed();
  if (src.empty()) return src;

  const auto cells = src.occupied_cells();
  std::vector<P3> pts;
  pts.reserve(cells.size() / d);
  for (std::size_t i = 0; i < cells.size() / d; ++i) pts.push_back(point(cells, i, d));
  const auto seed = independent_points(pts);
  const std::size_t k = seed.size() - 1;

  if (k == 0) return src;
  if (k == 1) return hull_segment(src, pts, seed);
  if (d == 2) return hull_polygon(src, pts);
  if (k == 2) return hull_planar(src, pts, seed);

  std::vector<P3> candidates;
  for (std::size_t i : line_extremes(src)) {
    CellIndex c(3);
    src.frame().unflat(i, c);
    candidates.push_back({c[0], c[1], c[2]});
  }
  const auto faces = polytope_faces(std::move(candidates));
  GriddedSet out = src;
  kernels::parallel::mark_halfspaces(out.frame(), faces, out.occupancy());
  return out;
}

}  // namespace opcalc
