#include "opcalc/iteration.hpp"

#include "opcalc/errors.hpp"
#include "opcalc/io.hpp"
#include "opcalc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace opcalc {

double IterationTrace::worst_residual_increase() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < residuals.size(); ++n) worst = std::max(worst, residuals[n] - residuals[n - 1]);
  return residuals.size() < 2 ? 0.0 : worst;
}

IterationTrace iterate(const FirmlyNonexpansiveMap& t, const Vector& x0, std::size_t max_iter, double tol_fix) {
  if (max_iter < 1) throw InvalidArgument("iterate: max_iter must be >= 1");
  require_dim(x0, t.dim(), "iterate");
  require_finite(x0, "iterate");

  IterationTrace trace;
  trace.x0 = x0;
  trace.stride = std::max<std::size_t>(1, (max_iter + kMaxStoredIterates) / kMaxStoredIterates);
  trace.residuals.reserve(max_iter);
  trace.norms.reserve(max_iter + 1);

  Vector x = x0;
  for (std::size_t n = 0; n < max_iter; ++n) {
    Vector y = t.map()(x);
    if (!y.allFinite()) {
      std::ostringstream msg;
      msg << "iterate: non-finite iterate at step " << n + 1 << " of " << t.descriptor();
      throw NumericalFailure(msg.str());
    }
    const double r = (x - y).norm();
    trace.residuals.push_back(r);
    trace.norms.push_back(x.norm());
    if (n % trace.stride == 0) {
      trace.iterates.push_back(x);
      trace.iterate_steps.push_back(n);
    }
    x = std::move(y);
    ++trace.steps_taken;
    if (r <= tol_fix) break;
  }
  trace.norms.push_back(x.norm());
  trace.iterates.push_back(x);
  trace.iterate_steps.push_back(trace.steps_taken);
  trace.last = x;
  return trace;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergedToFixedPoint: return "ConvergedToFixedPoint";
    case Verdict::AsymptoticallyRegularDivergent: return "AsymptoticallyRegularDivergent";
    case Verdict::NotAsymptoticallyRegular: return "NotAsymptoticallyRegular";
    case Verdict::BudgetExhausted: return "BudgetExhausted";
  }
  return "unknown";
}

namespace {

// Least-squares slope of ys against their index.
double ls_slope(std::span<const double> ys) {
  const std::size_t n = ys.size();
  if (n < 2) return 0.0;
  const double mean_x = 0.5 * static_cast<double>(n - 1);
  double mean_y = 0.0;
  for (double y : ys) mean_y += y;
  mean_y /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (ys[i] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

Diagnosis diagnose(const IterationTrace& trace, const FirmlyNonexpansiveMap& t, const DiagnoseThresholds& th) {
  if (trace.residuals.empty()) throw InvalidArgument("diagnose: empty trace");
  const std::size_t n = trace.residuals.size();
  const auto w = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(th.window_fraction * static_cast<double>(n))));

  Diagnosis d;
  d.window = w;
  d.final_residual = trace.residuals.back();
  d.final_norm = trace.norms.back();
  d.max_norm = *std::max_element(trace.norms.begin(), trace.norms.end());
  d.norm_escape = th.norm_escape.value_or(10.0 * (1.0 + trace.x0.norm()));

  std::vector<double> log_r;
  log_r.reserve(w);
  double window_sum = 0.0;
  for (std::size_t i = n - w; i < n; ++i) {
    log_r.push_back(std::log(std::max(trace.residuals[i], 1e-300)));
    window_sum += trace.residuals[i];
  }
  d.residual_slope = ls_slope(log_r);
  const std::span<const double> norm_window(trace.norms.data() + (trace.norms.size() - (w + 1)), w + 1);
  d.norm_slope = ls_slope(norm_window);
  const double window_max_norm = *std::max_element(norm_window.begin(), norm_window.end());

  if (d.final_residual <= th.tol_fix && window_sum <= th.cauchy_tol * (1.0 + d.final_norm)) {
    const Vector& p = trace.last;
    d.fixed_point_residual = (p - t.map()(p)).norm();
    if (d.fixed_point_residual <= th.tol_fix) {
      d.verdict = Verdict::ConvergedToFixedPoint;
      d.fixed_point = p;
      return d;
    }
  }
  if (d.final_residual <= th.reg_tol && window_max_norm > d.norm_escape && d.norm_slope > 0.0) {
    d.verdict = Verdict::AsymptoticallyRegularDivergent;
    return d;
  }
  if (d.final_residual > th.reg_floor &&
      std::abs(d.residual_slope) * static_cast<double>(w) <= th.flat_log_change) {
    d.verdict = Verdict::NotAsymptoticallyRegular;
    return d;
  }
  d.verdict = Verdict::BudgetExhausted;
  return d;
}

RegularityReport check_resolvent_regularity(const MonotoneOperatorView& a, std::span<const Vector> probes,
                                            std::size_t max_iter, const DiagnoseThresholds& thresholds) {
  if (probes.empty()) throw InvalidArgument("check_resolvent_regularity: no probes");
  const auto samples = minty_graph_sample(a, probes);
  RegularityReport report;
  report.min_sample_residual = std::numeric_limits<double>::infinity();
  for (const auto& pair : samples.pairs)
    report.min_sample_residual = std::min(report.min_sample_residual, pair.value.norm());

  const auto trace = iterate(a.resolvent(), probes.front(), max_iter, thresholds.tol_fix);
  report.diagnosis = diagnose(trace, a.resolvent(), thresholds);
  report.zero_in_range_closure = report.min_sample_residual <= thresholds.reg_tol;
  const Verdict v = report.diagnosis.verdict;
  report.orbit_regular = v == Verdict::ConvergedToFixedPoint || v == Verdict::AsymptoticallyRegularDivergent;
  report.inconclusive = v == Verdict::BudgetExhausted;
  report.consistent = !report.inconclusive && report.zero_in_range_closure == report.orbit_regular;
  return report;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace, bool with_coordinates) {
  const auto dim = static_cast<std::size_t>(trace.x0.size());
  out << "step,residual,norm";
  if (with_coordinates)
    for (std::size_t k = 0; k < dim; ++k) out << ",x" << k;
  out << '\n';
  std::size_t stored = 0;
  for (std::size_t n = 0; n <= trace.steps_taken; ++n) {
    out << n << ',';
    if (n < trace.residuals.size()) out << format_double(trace.residuals[n]);
    out << ',' << format_double(trace.norms[n]);
    if (with_coordinates) {
      const bool has = stored < trace.iterate_steps.size() && trace.iterate_steps[stored] == n;
      for (std::size_t k = 0; k < dim; ++k) {
        out << ',';
        if (has) out << format_double(trace.iterates[stored][static_cast<Eigen::Index>(k)]);
      }
      if (has) ++stored;
    }
    out << '\n';
  }
}

}  // namespace opcalc
