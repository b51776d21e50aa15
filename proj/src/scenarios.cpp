#include "opcalc/scenarios.hpp"

#include "opcalc/averaging.hpp"
#include "opcalc/errors.hpp"
#include "opcalc/io.hpp"
#include "opcalc/iteration.hpp"
#include "opcalc/sampling.hpp"
#include "opcalc/set_analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>

namespace opcalc {

namespace fs = std::filesystem;

namespace {

// Resolved parameters of one run. Presets read what they need with a default.
struct Context {
  ScenarioOptions options;
  fs::path out_dir;
  VerdictReport* report = nullptr;

  std::size_t iters(std::size_t fallback) const {
    if (options.iters) return record("iters", *options.iters);
    return record("iters", static_cast<std::size_t>(positive("iters", std::nullopt, static_cast<double>(fallback))));
  }
  double grid_h(double fallback) const { return record("grid_h", positive("grid_h", options.grid_h, fallback)); }
  double window(double fallback) const { return record("window", positive("window", options.window, fallback)); }
  double tol(double fallback) const { return record("tol", positive("tol", options.tol, fallback)); }
  std::uint64_t seed() const {
    return record("seed", options.seed.value_or(config_value<std::uint64_t>("seed", 1)));
  }

  // Option, then config field, then fallback; config values must be positive numbers.
  double positive(const char* key, std::optional<double> option, double fallback) const {
    if (option) return *option;
    const auto it = options.config.find(key);
    if (it == options.config.end()) return fallback;
    if (!it->is_number() || it->get<double>() <= 0.0)
      throw InvalidArgument(std::string("config field '") + key + "' must be a positive number");
    return it->get<double>();
  }

  template <class T>
  T config_value(const char* key, T fallback) const {
    const auto it = options.config.find(key);
    if (it == options.config.end()) return fallback;
    try {
      return it->template get<T>();
    } catch (const Json::exception&) {
      throw InvalidArgument(std::string("config field '") + key + "' has the wrong type");
    }
  }

  template <class T>
  T record(const char* key, T value) const {
    report->config[key] = value;
    return value;
  }

  void add(std::string name, int criterion, bool passed, Json evidence) const {
    report->checks.push_back({std::move(name), criterion, passed, std::move(evidence)});
  }

  // Opens an artifact file; returns a closed stream when no output directory is set.
  std::ofstream artifact(const std::string& file) const {
    std::ofstream out;
    if (out_dir.empty()) return out;
    out.open(out_dir / file);
    if (!out) throw Error("cannot write " + (out_dir / file).string());
    report->artifacts.push_back(file);
    return out;
  }

  void write_grid(const std::string& stem, const GriddedSet& g) const {
    if (out_dir.empty()) return;
    auto csv = artifact(stem + ".csv");
    write_grid_csv(csv, g);
    if (g.dim() <= 2 && g.frame().size() > 0) {
      auto pbm = artifact(stem + ".pbm");
      write_grid_pbm(pbm, g);
    }
  }

  void write_trace(const IterationTrace& trace) const {
    if (out_dir.empty()) return;
    auto out = artifact("trace.csv");
    write_trace_csv(out, trace);
  }
};

Json verdict_json(const Diagnosis& d) {
  Json j{{"verdict", to_string(d.verdict)},
         {"final_residual", d.final_residual},
         {"final_norm", d.final_norm},
         {"max_norm", d.max_norm},
         {"residual_slope", d.residual_slope},
         {"norm_slope", d.norm_slope},
         {"norm_escape", d.norm_escape},
         {"window", d.window}};
  if (d.fixed_point) {
    j["fixed_point"] = to_json(*d.fixed_point);
    j["fixed_point_residual"] = d.fixed_point_residual;
  }
  return j;
}

Json firmness_json(const FirmnessReport& r) {
  return {{"direct", r.direct}, {"complement", r.complement}, {"reflected", r.reflected},
          {"worst", r.worst()}, {"pairs", r.pairs},           {"tolerance", r.tolerance}};
}

Json near_equal_json(const NearEqualityResult& r) {
  return {{"closure_cells", r.metrics.closure_cells}, {"ri_cells", r.metrics.ri_cells},
          {"closure_distance", r.metrics.closure_distance}, {"ri_distance", r.metrics.ri_distance},
          {"tol_cells", r.metrics.tol_cells}};
}

// Cells k*h with k from round(a/h) to round(b/h).
GriddedSet interval_grid(double a, double b, double h) {
  const auto lo = static_cast<std::int64_t>(std::floor(a / h + 0.5));
  const auto hi = static_cast<std::int64_t>(std::floor(b / h + 0.5));
  GriddedSet g(h, GridFrame::spanning({lo}, {hi}));
  std::fill(g.occupancy().begin(), g.occupancy().end(), std::uint8_t{1});
  return g;
}

// 1-D probes dense enough that a map with slope >= 1/2 leaves no range gap wider than h/4.
std::size_t sweep_count(double radius, double h) {
  return std::max<std::size_t>(kDefaultRangeProbes, static_cast<std::size_t>(std::ceil(4.0 * radius / h)) + 1);
}

FirmlyNonexpansiveMap interval_projection(double a, double b) {
  return projection_map(std::make_shared<Box>(make_vector({a}), make_vector({b})));
}

FirmlyNonexpansiveMap interval_average() {
  return average_maps(WeightedFamily({interval_projection(0, 1), interval_projection(2, 3)}, {0.5, 0.5}));
}

// Built-in operators exercised by the identity and firmness suites, as JSON descriptors.
std::vector<Json> builtin_descriptors() {
  static const char* const text = R"([
    {"kind": "identity", "dim": 3},
    {"kind": "projection", "set": {"kind": "box", "lo": [0, -1], "hi": [1, 2]}},
    {"kind": "projection", "set": {"kind": "box", "lo": [0, null], "hi": ["inf", 1]}},
    {"kind": "projection", "set": {"kind": "ball", "center": [0.5, -0.2], "radius": 1.5}},
    {"kind": "projection", "set": {"kind": "affine", "point": [0, 2], "basis": [[1, 0]]}},
    {"kind": "projection", "set": {"kind": "affine", "point": [1, 0, -1], "basis": [[1, 0, 0], [0, 0.6, 0.8]]}},
    {"kind": "projection", "set": {"kind": "epigraph", "function": "exp"}},
    {"kind": "projection", "set": {"kind": "epigraph", "function": "square"}},
    {"kind": "prox", "function": {"kind": "quadratic", "a": 1, "b": [1, -1]}},
    {"kind": "prox", "function": {"kind": "abs", "dim": 2}},
    {"kind": "prox", "function": {"kind": "exp", "dim": 2}},
    {"kind": "prox", "function": {"kind": "linear", "c": [1, 0.5]}},
    {"kind": "prox", "function": {"kind": "indicator", "set": {"kind": "ball", "center": [0, 0], "radius": 1}}},
    {"kind": "linear", "matrix": [[1, 0], [0, 1]]},
    {"kind": "linear", "matrix": [[0, -1], [1, 0]]},
    {"kind": "linear", "matrix": [[1, 0], [0, 2]]},
    {"kind": "linear", "matrix": [[2, 1], [-1, 1]]},
    {"kind": "translation", "v": [-1]},
    {"kind": "resolvent_of", "inverse": true,
     "operator": {"kind": "projection", "set": {"kind": "ball", "center": [0, 0], "radius": 1}}},
    {"kind": "average", "weights": [0.5, 0.5], "members": [
      {"kind": "projection", "set": {"kind": "box", "lo": [0], "hi": [1]}},
      {"kind": "projection", "set": {"kind": "box", "lo": [2], "hi": [3]}}]},
    {"kind": "average", "weights": [0.5, 0.5], "members": [
      {"kind": "projection", "set": {"kind": "ball", "center": [0, 0], "radius": 1}},
      {"kind": "projection", "set": {"kind": "affine", "point": [0, 0], "basis": [[1, 0]]}}]},
    {"kind": "average", "weights": [0.5, 0.5], "members": [
      {"kind": "projection", "set": {"kind": "affine", "point": [0, 0], "basis": [[1, 0]]}},
      {"kind": "projection", "set": {"kind": "epigraph", "function": "exp"}}]},
    {"kind": "average", "weights": [0.2, 0.3, 0.5], "members": [
      {"kind": "prox", "function": {"kind": "abs", "dim": 2}},
      {"kind": "linear", "matrix": [[0, -1], [1, 0]]},
      {"kind": "projection", "set": {"kind": "box", "lo": [-1, -1], "hi": [1, 1]}}]}
  ])";
  const Json all = Json::parse(text);
  return {all.begin(), all.end()};
}

}  // namespace

std::vector<OperatorSpec> builtin_operators() {
  std::vector<OperatorSpec> out;
  for (const auto& d : builtin_descriptors()) {
    auto spec = parse_operator(d);
    out.push_back({std::move(spec.resolvent), std::move(spec.hint)});
  }
  // Prox of a proximal average is not expressible as a descriptor.
  auto q1 = std::make_shared<QuadraticFunction>(1.0, make_vector({0.0, 0.0}));
  auto q2 = std::make_shared<QuadraticFunction>(0.0, make_vector({0.0, 0.0}));
  const std::vector<ProxOracle> proxes{ProxOracle(q1), ProxOracle(q2)};
  const std::vector<double> w{0.5, 0.5};
  out.push_back({prox_map(prox_of_proximal_average(proxes, w), 2), HintBox::unbounded(2)});
  return out;
}

namespace {

// |J + (x - J) - x| per coordinate, in units of the spacing of doubles at the largest operand.
struct IdentityDefect {
  double max_norm = 0.0;
  double max_ulps = 0.0;
  std::size_t exact_zero = 0;
};

void accumulate_defect(IdentityDefect& acc, const Vector& x, const Vector& j, const Vector& k) {
  const Vector r = (j + k) - x;
  acc.max_norm = std::max(acc.max_norm, r.norm());
  if (r.isZero(0.0)) ++acc.exact_zero;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double scale = std::max({std::abs(x[i]), std::abs(j[i]), std::abs(k[i])});
    const double ulp = std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
    acc.max_ulps = std::max(acc.max_ulps, std::abs(r[i]) / ulp);
  }
}

void resolvent_identity(const Context& ctx) {
  const std::size_t probes = ctx.iters(1000);
  const std::uint64_t seed = ctx.seed();
  Json per = Json::array();
  IdentityDefect total;
  std::size_t evaluated = 0;
  for (const auto& [map, hint] : builtin_operators()) {
    const auto points = uniform_points(SampleRegion::cube(map.dim(), 10.0, probes, seed));
    const MonotoneOperatorView view(map);
    const auto inverse = view.inverse();
    IdentityDefect d;
    for (const auto& x : points) accumulate_defect(d, x, map(x), inverse.resolvent()(x));
    per.push_back({{"operator", map.descriptor()}, {"max_norm", d.max_norm}, {"max_ulps", d.max_ulps},
                   {"exact_zero", d.exact_zero}});
    total.max_norm = std::max(total.max_norm, d.max_norm);
    total.max_ulps = std::max(total.max_ulps, d.max_ulps);
    total.exact_zero += d.exact_zero;
    evaluated += points.size();
  }
  ctx.add("resolvent identity J_A + J_{A^-1} = Id (at most 1 ulp)", 1, total.max_ulps <= 1.0,
          {{"probes_per_operator", probes}, {"evaluations", evaluated}, {"exact_zero", total.exact_zero},
           {"max_norm", total.max_norm}, {"max_ulps", total.max_ulps}, {"operators", per}});

  // x - P_[a,b] x against the normal-cone element written out by cases.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ends(-5.0, 5.0), xs(-10.0, 10.0);
  double worst = 0.0;
  for (int interval = 0; interval < 20; ++interval) {
    double a = ends(rng), b = ends(rng);
    if (a > b) std::swap(a, b);
    const auto p = interval_projection(a, b);
    for (std::size_t i = 0; i < probes; ++i) {
      const double x = xs(rng);
      const double normal = x < a ? x - a : (x > b ? x - b : 0.0);
      worst = std::max(worst, std::abs((x - p(make_vector({x}))[0]) - normal));
    }
  }
  ctx.add("x - P_C x matches the interval normal cone", 1, worst <= 1e-12,
          {{"intervals", 20}, {"probes_per_interval", probes}, {"max_abs_difference", worst}, {"tolerance", 1e-12}});
}

void firm_nonexpansiveness(const Context& ctx) {
  const std::size_t pairs = ctx.iters(10000);
  const double tol = ctx.tol(kFirmTolerance);
  const std::uint64_t seed = ctx.seed();
  Json per = Json::array();
  double worst = -std::numeric_limits<double>::infinity();
  bool all = true;
  for (const auto& [map, hint] : builtin_operators()) {
    const auto r = check_firmly_nonexpansive(map, region_around(hint, pairs, seed), tol);
    Json e = firmness_json(r);
    e["operator"] = map.descriptor();
    per.push_back(std::move(e));
    worst = std::max(worst, r.worst());
    all = all && r.passed;
  }
  ctx.add("projections, prox oracles and averages are firmly nonexpansive", 2, all,
          {{"worst_violation", worst}, {"tolerance", tol}, {"pairs_per_operator", pairs}, {"operators", per}});
}

void fitzpatrick_energy(const Context& ctx) {
  const std::uint64_t seed = ctx.seed();
  const std::size_t samples = ctx.iters(1000);
  const MonotoneOperatorView identity(LinearMonotoneOperator(Matrix::Identity(3, 3)).resolvent());
  const auto probes = uniform_points(SampleRegion::cube(3, 2.0, samples, seed));
  const GraphSample base = minty_graph_sample(identity, probes);

  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Vector x = make_vector({u(rng), u(rng), u(rng)});
    const Vector xs = make_vector({u(rng), u(rng), u(rng)});
    GraphSample g = base;
    const Vector m = 0.5 * (x + xs);
    g.pairs.push_back({m, m});
    const double exact = 0.25 * (x + xs).squaredNorm();
    worst = std::max(worst, std::abs(fitzpatrick_estimate(g, x, xs) - exact));
  }
  ctx.add("F_Id(x, x*) = |x + x*|^2 / 4 with the maximizer sampled", 3, worst <= 1e-9,
          {{"instances", 50}, {"max_abs_error", worst}, {"tolerance", 1e-9}});

  const MonotoneOperatorView identity2(LinearMonotoneOperator(Matrix::Identity(2, 2)).resolvent());
  const GraphSample g2 = minty_graph_sample(identity2, uniform_points(SampleRegion::cube(2, 2.0, samples, seed)));
  const Vector x = make_vector({1.0, 0.0});
  const double exact = 0.25 * (x + x).squaredNorm();
  const double estimate = fitzpatrick_estimate(g2, x, x);
  const double shortfall = (exact - estimate) / exact;
  ctx.add("sampled Fitzpatrick estimate within 5% below the exact value", 3,
          estimate <= exact + 1e-12 && shortfall <= 0.05,
          {{"samples", samples}, {"x", to_json(x)}, {"xstar", to_json(x)}, {"exact", exact},
           {"estimate", estimate}, {"relative_shortfall", shortfall}});
}

void rotator_rectangularity(const Context& ctx) {
  const std::size_t n = ctx.iters(kDefaultGammaSamples);
  const double g_id = rectangularity_gamma_estimate(LinearMonotoneOperator(Matrix::Identity(2, 2)), n);
  const double g_rot = rectangularity_gamma_estimate(LinearMonotoneOperator::rotation(std::numbers::pi / 2), n);
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 1;
  diag(1, 1) = 2;
  const double g_diag = rectangularity_gamma_estimate(LinearMonotoneOperator(diag), n);
  ctx.add("gamma(I) = 1", 4, std::abs(g_id - 1.0) <= 1e-9, {{"gamma", g_id}, {"samples", n}});
  ctx.add("rotation by pi/2 is not rectangular", 4, g_rot <= 1e-6, {{"gamma", g_rot}, {"samples", n}});
  ctx.add("gamma(diag(1,2)) = 0.5", 4, std::abs(g_diag - 0.5) <= 1e-3, {{"gamma", g_diag}, {"samples", n}});
}

// Samples ran T over [-R, R] and compares it with the interval [1, 2].
void interval_range_check(const Context& ctx, const FirmlyNonexpansiveMap& t, const std::string& name, int criterion,
                          const std::string& stem) {
  const double h = ctx.grid_h(1e-3);
  const double radius = ctx.window(kDefaultRangeWindow);
  const std::size_t count = sweep_count(radius, h);
  const auto range = sample_range(t, {make_vector({-radius}), make_vector({radius}), count, ctx.seed()});
  const GriddedSet sampled = rasterize(range, 1, h);
  const GriddedSet target = interval_grid(1.0, 2.0, h);
  const double hd = hausdorff_cells(sampled, target);
  const auto ne = near_equal(sampled, target, ctx.tol(kDefaultToleranceCells));
  ctx.write_grid(stem, sampled);
  ctx.write_grid("target", target);
  ctx.add(name, criterion, hd <= 2.0 + 1e-9 && ne.nearly_equal,
          {{"h", h}, {"probes", count}, {"hausdorff", hd * h}, {"hausdorff_cells", hd}, {"bound", 2 * h},
           {"near_equal", near_equal_json(ne)}});
}

void averaged_projections_1d(const Context& ctx) {
  interval_range_check(ctx, interval_average(), "ran(P_[0,1]/2 + P_[2,3]/2) ~ [1,2]", 5, "range");
}

void range_near_equality_2d(const Context& ctx) {
  const double h = ctx.grid_h(0.02);
  const double clip = ctx.window(5.0);
  const double tol = ctx.tol(kDefaultToleranceCells);
  const double probe_radius = kDefaultRangeWindow;
  const auto ball = std::make_shared<Ball>(make_vector({0.0, 0.0}), 1.0);
  const auto line = std::make_shared<AffineSet>(make_vector({0.0, 0.0}), std::vector<Vector>{make_vector({1.0, 0.0})});
  const auto t = average_maps(WeightedFamily({projection_map(ball), projection_map(line)}, {0.5, 0.5}));

  const std::size_t count = ctx.config_value<std::size_t>("probes_per_level", 1000000);
  const std::size_t levels = ctx.config_value<std::size_t>("levels", 6);
  const SampleRegion region{make_vector({-probe_radius, -probe_radius}), make_vector({probe_radius, probe_radius}),
                            count, ctx.seed()};
  const GriddedSet sampled = clip_to_window(sample_range_grid(t.map(), region, h, levels), clip);

  // 1/2 B + 1/2 (R x {0}); the line is cut long enough to cover the window after halving.
  const double half_length = 2.0 * clip + 2.0;
  const GriddedSet disk = rasterize_region([&](const Vector& x) { return x.norm() <= 1.0; },
                                           {make_vector({-1.0, -1.0}), make_vector({1.0, 1.0})}, h);
  const GriddedSet segment = rasterize_region([](const Vector&) { return true; },
                                              {make_vector({-half_length, 0.0}), make_vector({half_length, 0.0})}, h);
  const std::vector<GriddedSet> parts{disk, segment};
  const std::vector<double> weights{0.5, 0.5};
  const GriddedSet target = clip_to_window(minkowski_combination(parts, weights), clip);

  const auto ne = near_equal(sampled, target, tol);
  ctx.write_grid("range", sampled);
  ctx.write_grid("target", target);
  Json e = near_equal_json(ne);
  e["h"] = h;
  e["window"] = clip;
  e["probes_per_level"] = count;
  e["levels"] = levels;
  e["range_cells"] = sampled.count();
  e["target_cells"] = target.count();
  ctx.add("ran(P_ball/2 + P_line/2) ~ B/2 + line/2 inside the window", 5, ne.nearly_equal, std::move(e));
}

FirmlyNonexpansiveMap kool_map() {
  const auto axis = std::make_shared<AffineSet>(make_vector({0.0, 0.0}), std::vector<Vector>{make_vector({1.0, 0.0})});
  const auto epi = std::make_shared<Epigraph>(EpigraphSpec::exp());
  return average_maps(WeightedFamily({projection_map(axis), projection_map(epi)}, {0.5, 0.5}));
}

// Reference run (independent bisection-based projection, 1e5 steps): x_1 = -5.4098, |x| = 5.41.
constexpr double kKoolThreshold = -5.4;
constexpr double kKoolNormEscape = 5.0;

void kool_divergence(const Context& ctx) {
  const std::size_t budget = ctx.iters(100000);
  const auto t = kool_map();
  const Vector x0 = make_vector({0.0, 2.0});
  const auto trace = iterate(t, x0, budget, ctx.tol(1e-10));
  DiagnoseThresholds th;
  th.tol_fix = ctx.tol(1e-10);
  th.norm_escape = ctx.config_value<double>("norm_escape", kKoolNormEscape);
  const auto d = diagnose(trace, t, th);
  ctx.write_trace(trace);

  const double increase = trace.worst_residual_increase();
  ctx.add("residuals nonincreasing", 6, increase <= 0.0,
          {{"worst_increase", increase}, {"steps", trace.steps_taken}});
  ctx.add("final residual <= 1e-2", 6, d.final_residual <= 1e-2, {{"final_residual", d.final_residual}});
  ctx.add("first coordinate below the calibrated threshold", 6, trace.last[0] < kKoolThreshold,
          {{"x_final", to_json(trace.last)}, {"threshold", kKoolThreshold}});
  ctx.add("verdict AsymptoticallyRegularDivergent", 6, d.verdict == Verdict::AsymptoticallyRegularDivergent,
          verdict_json(d));
}

void average_regularity(const Context& ctx) {
  const std::size_t budget = ctx.iters(10000);
  const std::uint64_t seed = ctx.seed();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-5.0, 5.0), half(0.2, 2.0), start(-10.0, 10.0);

  Json cases = Json::array();
  bool never_nonregular = true, all_converged = true;
  double worst_fixed = 0.0;
  for (int i = 0; i < 20; ++i) {
    Vector lo1, hi1, lo2, hi2;
    for (;;) {
      const Vector c1 = make_vector({center(rng), center(rng)}), c2 = make_vector({center(rng), center(rng)});
      const Vector r1 = make_vector({half(rng), half(rng)}), r2 = make_vector({half(rng), half(rng)});
      lo1 = c1 - r1, hi1 = c1 + r1, lo2 = c2 - r2, hi2 = c2 + r2;
      const bool apart = (hi1.array() < lo2.array()).any() || (hi2.array() < lo1.array()).any();
      if (apart) break;
    }
    const auto t = average_maps(WeightedFamily(
        {projection_map(std::make_shared<Box>(lo1, hi1)), projection_map(std::make_shared<Box>(lo2, hi2))},
        {0.5, 0.5}));
    const Vector x0 = make_vector({start(rng), start(rng)});
    const auto d = diagnose(iterate(t, x0, budget), t);
    never_nonregular = never_nonregular && d.verdict != Verdict::NotAsymptoticallyRegular;
    const bool converged = d.verdict == Verdict::ConvergedToFixedPoint;
    all_converged = all_converged && converged;
    double fixed = std::numeric_limits<double>::infinity();
    if (converged) fixed = (*d.fixed_point - t(*d.fixed_point)).norm();
    worst_fixed = std::max(worst_fixed, fixed);
    cases.push_back({{"box1", {to_json(lo1), to_json(hi1)}}, {"box2", {to_json(lo2), to_json(hi2)}},
                     {"x0", to_json(x0)}, {"verdict", to_string(d.verdict)}, {"fixed_point_residual", fixed}});
  }
  ctx.add("no disjoint-box average is NotAsymptoticallyRegular", 7, never_nonregular, {{"cases", cases}});
  ctx.add("every disjoint-box average converges to a fixed point (1e-8)", 7, all_converged && worst_fixed <= 1e-8,
          {{"worst_fixed_point_residual", worst_fixed}, {"tolerance", 1e-8}});

  const auto t = interval_average();
  const auto trace = iterate(t, make_vector({0.0}), budget);
  const auto d = diagnose(trace, t);
  ctx.write_trace(trace);
  const double p = d.fixed_point ? (*d.fixed_point)[0] : std::numeric_limits<double>::quiet_NaN();
  ctx.add("interval average converges to 1.5", 7,
          d.verdict == Verdict::ConvergedToFixedPoint && std::abs(p - 1.5) <= 1e-8, verdict_json(d));
}

void resolvent_average_matrices(const Context& ctx) {
  const std::vector<Matrix> mats{Matrix::Zero(3, 3), Matrix::Identity(3, 3)};
  const std::vector<double> w{0.5, 0.5};
  const Matrix avg = matrix_resolvent_average(mats, w);
  const double err = (avg - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff();
  ctx.add("matrix resolvent average of (0, I) is I/3", 8, err <= 1e-12, {{"max_abs_error", err}});

  Matrix a(2, 2);
  a << 2.0, 1.0, -1.0, 1.0;
  const auto ja = LinearMonotoneOperator(a).resolvent();
  const auto twice = resolvent_average(WeightedFamily({ja, ja}, {0.5, 0.5}));
  const auto probes = uniform_points(SampleRegion::cube(2, 10.0, 1000, ctx.seed()));
  const auto g1 = minty_graph_sample(MonotoneOperatorView(ja), probes);
  const auto g2 = minty_graph_sample(twice, probes);
  double diff = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i)
    diff = std::max({diff, (g1.pairs[i].point - g2.pairs[i].point).cwiseAbs().maxCoeff(),
                     (g1.pairs[i].value - g2.pairs[i].value).cwiseAbs().maxCoeff()});
  ctx.add("resolvent average of (A, A) has the graph of A", 8, diff <= 1e-12, {{"max_abs_difference", diff}});

  const auto avg_view = resolvent_average(
      WeightedFamily({interval_projection(0, 1), interval_projection(2, 3)}, {0.5, 0.5}));
  interval_range_check(ctx, avg_view.resolvent(), "dom of the resolvent average of N_[0,1], N_[2,3] ~ [1,2]", 8,
                       "domain");
}

void nonregular_resolvent(const Context& ctx) {
  const std::size_t budget = ctx.iters(10000);
  const auto f = std::make_shared<LinearFunction>(make_vector({1.0}));
  const auto t = prox_map(ProxOracle(f), 1);
  double worst = 0.0;
  for (const auto& x : uniform_points(SampleRegion::cube(1, 100.0, 1000, ctx.seed())))
    worst = std::max(worst, std::abs(t(x)[0] - (x[0] - 1.0)));
  ctx.add("prox of the identity function is translation by -1", 9, worst <= 1e-12, {{"max_abs_error", worst}});

  const auto trace = iterate(t, make_vector({0.0}), budget);
  const auto d = diagnose(trace, t);
  ctx.write_trace(trace);
  double spread = 0.0;
  for (double r : trace.residuals) spread = std::max(spread, std::abs(r - 1.0));
  Json e = verdict_json(d);
  e["max_residual_deviation"] = spread;
  ctx.add("verdict NotAsymptoticallyRegular with residual 1", 9,
          d.verdict == Verdict::NotAsymptoticallyRegular && spread <= 1e-12, std::move(e));
}

void composition_counterexample(const Context& ctx) {
  const double h = ctx.grid_h(0.01);
  const double radius = ctx.window(kDefaultRangeWindow);
  const double tol = ctx.tol(kDefaultToleranceCells);
  const auto ball = std::make_shared<Ball>(make_vector({0.0, 0.0}), 1.0);
  const auto line = std::make_shared<AffineSet>(make_vector({0.0, 2.0}), std::vector<Vector>{make_vector({1.0, 0.0})});
  const VectorMap composed = [ball, line](const Vector& x) { return ball->project(line->project(x)); };
  const std::size_t count = std::max<std::size_t>(100000, static_cast<std::size_t>(std::ceil(4.0 * radius / h)));
  const SampleRegion region{make_vector({-radius, -radius}), make_vector({radius, radius}), count, ctx.seed()};
  const GriddedSet range = rasterize(sample_range(composed, region), 2, h);
  const auto r = nearly_convex(range, tol);
  ctx.write_grid("range", range);
  Json e{{"h", h}, {"probes", count}, {"cells", range.count()}, {"worst_cells", r.worst_cells},
         {"offending_cells", r.offending}, {"tol_cells", tol}};
  if (r.witness) e["witness"] = to_json(*r.witness);
  ctx.add("ran(P_ball o P_line) is not nearly convex", 10, !r.nearly_convex && r.witness.has_value(), std::move(e));
}

// Random convex test shapes in the plane, in units where h is the cell size.
struct Shape {
  std::function<bool(const Vector&)> inside;
  HintBox box;
  std::function<Vector(std::mt19937_64&)> sample;  // uniform point of the shape
};

Shape random_shape(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vector c = make_vector({u(rng) - 0.5, u(rng) - 0.5});
  if (index % 2 == 0) {  // rotated ellipse
    const double a = 0.4 + 0.6 * u(rng), b = 0.25 + 0.5 * u(rng), th = std::numbers::pi * u(rng);
    const double cs = std::cos(th), sn = std::sin(th);
    Shape s;
    s.inside = [=](const Vector& x) {
      const double dx = x[0] - c[0], dy = x[1] - c[1];
      const double p = (cs * dx + sn * dy) / a, q = (-sn * dx + cs * dy) / b;
      return p * p + q * q <= 1.0;
    };
    const double r = std::max(a, b);
    s.box = {c.array() - r, c.array() + r};
    s.sample = [=](std::mt19937_64& g) {
      std::uniform_real_distribution<double> v(0.0, 1.0);
      const double rho = std::sqrt(v(g)), phi = 2 * std::numbers::pi * v(g);
      const double p = a * rho * std::cos(phi), q = b * rho * std::sin(phi);
      return make_vector({c[0] + cs * p - sn * q, c[1] + sn * p + cs * q});
    };
    return s;
  }
  // Jittered 5- to 7-gon inscribed in a circle. Interior angles stay above ~79 degrees, so a
  // one-cell erosion moves no corner by more than 1/sin(39.5 deg) ~ 1.6 cells.
  const double rad = 0.5 + 0.5 * u(rng);
  const int n = 5 + static_cast<int>(3 * u(rng)) % 3;
  std::vector<Vector> v;
  for (int k = 0; k < n; ++k) {
    const double phi = 2 * std::numbers::pi * (k + 0.4 * u(rng)) / n;
    v.push_back(c + rad * make_vector({std::cos(phi), std::sin(phi)}));
  }
  const auto cross = [](const Vector& o, const Vector& a, const Vector& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  Shape s;
  s.inside = [=](const Vector& x) {
    for (int k = 0; k < n; ++k)
      if (cross(v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>((k + 1) % n)], x) < 0) return false;
    return true;
  };
  s.box = {c.array() - rad, c.array() + rad};
  s.sample = [=](std::mt19937_64& g) {  // rejection from the bounding box
    std::uniform_real_distribution<double> w(-rad, rad);
    for (;;) {
      const Vector x = c + make_vector({w(g), w(g)});
      if (s.inside(x)) return x;
    }
  };
  return s;
}

// Drops a random half of the boundary cells: the result lies between ri and the set itself.
GriddedSet thin_boundary(const GriddedSet& g, std::mt19937_64& rng) {
  const GriddedSet inner = erode(g).reframed(g.frame());
  GriddedSet out = g;
  std::bernoulli_distribution drop(0.5);
  for (std::size_t i = 0; i < out.occupancy().size(); ++i)
    if (out.occupancy()[i] && !inner.occupancy()[i] && drop(rng)) out.occupancy()[i] = 0;
  return out.trimmed();
}

void set_calculus(const Context& ctx) {
  const auto started = std::chrono::steady_clock::now();
  const double h = ctx.grid_h(0.05);
  // Per-property tolerances in cells; --tol replaces all of them. Squeeze and stability need 3: a
  // one-cell erosion of a staircase boundary leaves cells sqrt(5) cells from the eroded set.
  const std::optional<double> tol_override = ctx.options.tol ? ctx.options.tol : std::nullopt;
  const double tol_squeeze = ctx.record("tol_squeeze", tol_override.value_or(3.0));
  const double tol_stable = ctx.record("tol_stability", tol_override.value_or(3.0));
  const double tol_minkowski = ctx.record("tol_minkowski", tol_override.value_or(2.0));
  const double tol_cancel = ctx.record("tol_cancellation", tol_override.value_or(3.0));
  const auto shapes_n = static_cast<int>(ctx.iters(10));
  std::mt19937_64 rng(ctx.seed());

  std::vector<Shape> shapes;
  std::vector<GriddedSet> grids;
  for (int i = 0; i < shapes_n; ++i) {
    shapes.push_back(random_shape(rng, i));
    grids.push_back(rasterize_region(shapes.back().inside, shapes.back().box.inflated(1.1), h));
  }

  // Squeeze: C in A in cl C makes A nearly convex and nearly equal to C.
  bool squeeze = true;
  double squeeze_worst = 0.0;
  for (const auto& c : grids) {
    const GriddedSet a = thin_boundary(c, rng);
    const auto conv = nearly_convex(a, tol_squeeze);
    const auto eq = near_equal(a, c, tol_squeeze);
    squeeze = squeeze && conv.nearly_convex && eq.nearly_equal;
    squeeze_worst = std::max({squeeze_worst, conv.worst_cells, eq.metrics.closure_cells, eq.metrics.ri_cells});
  }
  ctx.add("squeeze: sets between C and cl C are nearly convex and ~ C", 11, squeeze,
          {{"shapes", shapes_n}, {"worst_cells", squeeze_worst}, {"tol_cells", tol_squeeze}});

  // g ~ cl g ~ ri g ~ conv g pairwise.
  bool stable = true;
  double stable_worst = 0.0;
  for (const auto& g : grids) {
    const std::vector<GriddedSet> family{g, closure_grid(g), relative_interior_grid(g), convex_hull_grid(g)};
    for (std::size_t i = 0; i < family.size(); ++i)
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        const auto eq = near_equal(family[i], family[j], tol_stable);
        stable = stable && eq.nearly_equal;
        stable_worst = std::max({stable_worst, eq.metrics.closure_cells, eq.metrics.ri_cells});
      }
  }
  ctx.add("g, cl g, ri g and conv g are pairwise nearly equal", 11, stable,
          {{"shapes", shapes_n}, {"worst_cells", stable_worst}, {"tol_cells", tol_stable}});

  // ri(l A + m B) ~ l ri A + m ri B.
  bool distribute = true;
  double dist_worst = 0.0;
  std::uniform_real_distribution<double> lam(0.2, 0.8);
  for (int i = 0; i < shapes_n; ++i) {
    const auto& a = grids[static_cast<std::size_t>(i)];
    const auto& b = grids[static_cast<std::size_t>((i + 1) % shapes_n)];
    const double l = lam(rng);
    const std::vector<double> w{l, 1.0 - l};
    const std::vector<GriddedSet> sets{a, b};
    const std::vector<GriddedSet> ris{relative_interior_grid(a), relative_interior_grid(b)};
    const auto eq = near_equal(relative_interior_grid(minkowski_combination(sets, w)), minkowski_combination(ris, w),
                               tol_minkowski);
    distribute = distribute && eq.nearly_equal;
    dist_worst = std::max({dist_worst, eq.metrics.closure_cells, eq.metrics.ri_cells});
  }
  ctx.add("ri distributes over Minkowski combinations", 11, distribute,
          {{"pairs", shapes_n}, {"worst_cells", dist_worst}, {"tol_cells", tol_minkowski}});

  // A + E ~ B + E implies A ~ B, with B an independent point-cloud discretization of A's shape
  // and E a small disk.
  const double disk_radius = 4.0 * h;
  const GriddedSet e = rasterize_region([&](const Vector& x) { return x.norm() <= disk_radius; },
                                        {make_vector({-disk_radius, -disk_radius}), make_vector({disk_radius, disk_radius})},
                                        h);
  bool cancel = true;
  double cancel_worst = 0.0;
  for (int i = 0; i < shapes_n; ++i) {
    const auto& shape = shapes[static_cast<std::size_t>(i)];
    const auto& a = grids[static_cast<std::size_t>(i)];
    std::vector<Vector> cloud;
    const std::size_t n = 20 * a.count();
    for (std::size_t k = 0; k < n; ++k) cloud.push_back(shape.sample(rng));
    const GriddedSet b = rasterize(cloud, 2, h);
    const std::vector<double> w{1.0, 1.0};
    const std::vector<GriddedSet> ae{a, e}, be{b, e};
    const auto premise = near_equal(minkowski_combination(ae, w), minkowski_combination(be, w), tol_cancel);
    const auto conclusion = near_equal(a, b, tol_cancel);
    cancel = cancel && premise.nearly_equal && conclusion.nearly_equal;
    cancel_worst = std::max({cancel_worst, premise.metrics.closure_cells, premise.metrics.ri_cells,
                             conclusion.metrics.closure_cells, conclusion.metrics.ri_cells});
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  ctx.add("cancellation: A + E ~ B + E and A ~ B", 11, cancel,
          {{"shapes", shapes_n}, {"worst_cells", cancel_worst}, {"tol_cells", tol_cancel}});
  ctx.add("set-calculus suite within 60 s", 11, seconds <= 60.0, {{"seconds", seconds}});
  if (!grids.empty()) ctx.write_grid("shape0", grids.front());
}

// Iterates a user-supplied operator and checks firmness plus an optional expected verdict.
void custom(const Context& ctx) {
  const Json& cfg = ctx.options.config;
  const auto it = cfg.find("operator");
  if (it == cfg.end()) throw InvalidArgument("custom scenario: config needs an \"operator\" descriptor");
  const auto spec = parse_operator(*it, "operator");
  const std::size_t d = spec.resolvent.dim();
  Vector x0 = Vector::Zero(static_cast<Eigen::Index>(d));
  if (const auto x = cfg.find("x0"); x != cfg.end()) x0 = parse_vector(*x, "x0");
  require_dim(x0, d, "custom scenario x0");
  ctx.report->config["operator"] = *it;
  ctx.report->config["x0"] = to_json(x0);

  const std::uint64_t seed = ctx.seed();
  const auto firm = check_firmly_nonexpansive(spec.resolvent, region_around(spec.hint, 10000, seed), kFirmTolerance);
  ctx.add("operator resolvent is firmly nonexpansive", 0, firm.passed, firmness_json(firm));

  const double tol_fix = ctx.tol(1e-10);
  const auto trace = iterate(spec.resolvent, x0, ctx.iters(10000), tol_fix);
  DiagnoseThresholds th;
  th.tol_fix = tol_fix;
  if (const auto ne = cfg.find("norm_escape"); ne != cfg.end()) {
    if (!ne->is_number() || ne->get<double>() <= 0.0) throw InvalidArgument("norm_escape: expected a positive number");
    th.norm_escape = ne->get<double>();
  }
  const auto diag = diagnose(trace, spec.resolvent, th);
  ctx.write_trace(trace);
  Json e = verdict_json(diag);
  bool ok = true;
  if (const auto ex = cfg.find("expect"); ex != cfg.end()) {
    e["expected"] = *ex;
    ok = ex->is_string() && ex->get<std::string>() == to_string(diag.verdict);
  }
  ctx.add("iteration diagnosis", 0, ok, std::move(e));
}

struct Preset {
  const char* name;
  const char* description;
  void (*run)(const Context&);
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"resolvent-identity", "J_A + J_{A^-1} = Id for every built-in operator; normal cones of intervals",
       resolvent_identity},
      {"firm-nonexpansiveness", "firmness of projections, prox oracles and weighted averages (--tol, --iters pairs)",
       firm_nonexpansiveness},
      {"fitzpatrick-energy", "F_Id(x, x*) = |x + x*|^2 / 4, exact and sampled", fitzpatrick_energy},
      {"rotator-rectangularity", "gamma estimates for I, rotation by pi/2 and diag(1,2)", rotator_rectangularity},
      {"averaged-projections-1d", "ran(P_[0,1]/2 + P_[2,3]/2) vs [1,2] at h = 1e-3", averaged_projections_1d},
      {"range-near-equality-2d", "ran(P_ball/2 + P_line/2) vs B/2 + line/2 in the window R = 5 (--window)",
       range_near_equality_2d},
      {"kool-divergence", "P_axis/2 + P_epi exp/2 from (0,2): asymptotically regular divergence", kool_divergence},
      {"average-regularity", "averaged projections onto disjoint boxes and intervals converge", average_regularity},
      {"resolvent-average-matrices", "matrix resolvent average, self-average, domain of an average",
       resolvent_average_matrices},
      {"nonregular-resolvent", "prox of f(x) = x on R is x - 1 and is not asymptotically regular",
       nonregular_resolvent},
      {"composition-counterexample", "ran(P_ball o P_{y=2}) fails the near-convexity test",
       composition_counterexample},
      {"set-calculus", "squeeze, ri/closure/hull stability, Minkowski ri, cancellation on random shapes",
       set_calculus},
      {"custom", "iterate the \"operator\" of a config file from \"x0\"; optional \"expect\" verdict", custom},
  };
  return all;
}

}  // namespace

bool VerdictReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json VerdictReport::to_json(const std::string& timestamp) const {
  Json checks_json = Json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"name", c.name}, {"criterion", c.criterion}, {"passed", c.passed}, {"evidence", c.evidence}});
  return {{"schema", kReportSchema}, {"toolkit_version", kToolkitVersion},
          {"timestamp", timestamp},  {"scenario", scenario},
          {"config", config},        {"checks", checks_json},
          {"artifacts", artifacts},  {"passed", passed()}};
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& p : presets()) out.push_back({p.name, p.description});
  return out;
}

bool has_scenario(const std::string& name) {
  const auto& all = presets();
  return std::any_of(all.begin(), all.end(), [&](const Preset& p) { return name == p.name; });
}

VerdictReport run_scenario(const std::string& name, const ScenarioOptions& options, const fs::path& out_dir) {
  const auto& all = presets();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return name == p.name; });
  if (it == all.end()) throw InvalidArgument("unknown scenario '" + name + "'");
  if (!options.config.is_object()) throw InvalidArgument("config must be a JSON object");
  if (!out_dir.empty()) fs::create_directories(out_dir);

  VerdictReport report;
  report.scenario = name;
  Context ctx{options, out_dir, &report};
  // Shared numeric fields are validated even when a preset does not use them.
  for (const char* key : {"iters", "grid_h", "window", "tol", "norm_escape"}) ctx.positive(key, std::nullopt, 1.0);
  it->run(ctx);
  return report;
}

void write_report(const VerdictReport& report, const fs::path& out_dir, const std::string& timestamp) {
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "report.json");
  if (!out) throw Error("cannot write " + (out_dir / "report.json").string());
  out << report.to_json(timestamp).dump(2) << '\n';
}

}  // namespace opcalc
