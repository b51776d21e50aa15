// Serial reference vs OpenMP kernels on workloads the presets actually run.

#include "opcalc/convex_sets.hpp"
#include "opcalc/kernels.hpp"
#include "opcalc/sampling.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace opcalc;
namespace serial = opcalc::kernels::serial;
namespace parallel = opcalc::kernels::parallel;

namespace {

std::vector<Vector> points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  return uniform_points(SampleRegion::cube(dim, 10.0, n, seed));
}

const VectorMap& epigraph_projection() {
  static const auto spec = EpigraphSpec::exp();
  static const VectorMap map = [](const Vector& x) { return project_epigraph(spec, x); };
  return map;
}

template <bool Parallel>
void apply_map(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)), 2, 1);
  for (auto _ : state) {
    auto out = Parallel ? parallel::apply_map(epigraph_projection(), pts) : serial::apply_map(epigraph_projection(), pts);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void firm_violations(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = points(n, 2, 2), ys = points(n, 2, 3);
  const auto txs = serial::apply_map(epigraph_projection(), xs);
  const auto tys = serial::apply_map(epigraph_projection(), ys);
  for (auto _ : state) {
    const auto r = Parallel ? parallel::firm_violations(xs, txs, ys, tys) : serial::firm_violations(xs, txs, ys, tys);
    benchmark::DoNotOptimize(r.direct);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void fitzpatrick_max(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = points(n, 3, 4), vals = points(n, 3, 5);
  const Vector x = Vector::Ones(3), xs = -Vector::Ones(3);
  for (auto _ : state) {
    const double v = Parallel ? parallel::fitzpatrick_max(pts, vals, x, xs) : serial::fitzpatrick_max(pts, vals, x, xs);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void minkowski_mark(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a, b;
  for (const auto& p : points(n, 2, 6)) a.insert(a.end(), p.data(), p.data() + 2);
  for (const auto& p : points(n, 2, 7)) b.insert(b.end(), p.data(), p.data() + 2);
  const GridFrame frame = GridFrame::spanning({-21, -21}, {21, 21});
  std::vector<std::uint8_t> occ(frame.size());
  for (auto _ : state) {
    std::fill(occ.begin(), occ.end(), 0);
    Parallel ? parallel::minkowski_mark(a, b, 2, frame, occ) : serial::minkowski_mark(a, b, 2, frame, occ);
    benchmark::DoNotOptimize(occ.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void squared_edt(benchmark::State& state) {
  const auto side = state.range(0);
  const GridFrame frame = GridFrame::spanning({0, 0}, {side - 1, side - 1});
  std::vector<double> init(frame.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < init.size(); i += 97) init[i] = 0.0;
  for (auto _ : state) {
    auto v = init;
    for (std::size_t axis = 0; axis < 2; ++axis)
      Parallel ? parallel::squared_edt_axis(frame, v, axis) : serial::squared_edt_axis(frame, v, axis);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frame.size()));
}

template <bool Parallel>
void axis_filter(benchmark::State& state) {
  const auto side = state.range(0);
  const GridFrame frame = GridFrame::spanning({0, 0}, {side - 1, side - 1});
  std::vector<std::uint8_t> in(frame.size()), out(frame.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = (i * 2654435761u) % 3 != 0;
  for (auto _ : state) {
    for (std::size_t axis = 0; axis < 2; ++axis)
      Parallel ? parallel::axis_filter(frame, in, out, axis, true) : serial::axis_filter(frame, in, out, axis, true);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frame.size()));
}

template <bool Parallel>
void mark_halfspaces(benchmark::State& state) {
  const auto side = state.range(0);
  const GridFrame frame = GridFrame::spanning({-side, -side, -side}, {side, side, side});
  const std::vector<kernels::HalfSpace> faces{{{1, 1, 1}, side}, {{-1, 0, 0}, side / 2}, {{0, -1, 1}, side}, {{0, 0, -1}, side}};
  std::vector<std::uint8_t> occ(frame.size());
  for (auto _ : state) {
    Parallel ? parallel::mark_halfspaces(frame, faces, occ) : serial::mark_halfspaces(frame, faces, occ);
    benchmark::DoNotOptimize(occ.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frame.size()));
}

}  // namespace

BENCHMARK(apply_map<false>)->Name("apply_map/serial")->Arg(20000);
BENCHMARK(apply_map<true>)->Name("apply_map/omp")->Arg(20000);
BENCHMARK(firm_violations<false>)->Name("firm_violations/serial")->Arg(100000);
BENCHMARK(firm_violations<true>)->Name("firm_violations/omp")->Arg(100000);
BENCHMARK(fitzpatrick_max<false>)->Name("fitzpatrick_max/serial")->Arg(100000);
BENCHMARK(fitzpatrick_max<true>)->Name("fitzpatrick_max/omp")->Arg(100000);
BENCHMARK(minkowski_mark<false>)->Name("minkowski_mark/serial")->Arg(1000);
BENCHMARK(minkowski_mark<true>)->Name("minkowski_mark/omp")->Arg(1000);
BENCHMARK(squared_edt<false>)->Name("squared_edt/serial")->Arg(1000);
BENCHMARK(squared_edt<true>)->Name("squared_edt/omp")->Arg(1000);
BENCHMARK(axis_filter<false>)->Name("axis_filter/serial")->Arg(1000);
BENCHMARK(axis_filter<true>)->Name("axis_filter/omp")->Arg(1000);
BENCHMARK(mark_halfspaces<false>)->Name("mark_halfspaces/serial")->Arg(60);
BENCHMARK(mark_halfspaces<true>)->Name("mark_halfspaces/omp")->Arg(60);

BENCHMARK_MAIN();
