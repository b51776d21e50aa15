#pragma once

#include "opcalc/operators.hpp"
#include "opcalc/vector.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opcalc {

inline constexpr std::size_t kMaxStoredIterates = 100000;

/// Picard orbit x_{n+1} = T x_n. residuals[n] = |x_n - x_{n+1}| and norms[n] = |x_n| are dense;
/// iterates are thinned to every `stride`-th step (the final iterate is always kept).
struct IterationTrace {
  std::vector<Vector> iterates;
  std::vector<std::size_t> iterate_steps;  // step index of each stored iterate
  std::vector<double> residuals;
  std::vector<double> norms;
  std::size_t steps_taken = 0;
  std::size_t stride = 1;
  Vector x0;
  Vector last;  // x_{steps_taken}

  /// Largest increase residuals[n+1] - residuals[n] (<= 0 for a nonexpansive T).
  double worst_residual_increase() const;
};

/// Runs until residual <= tol_fix or max_iter steps. Throws NumericalFailure naming the step
/// when an iterate becomes non-finite.
IterationTrace iterate(const FirmlyNonexpansiveMap& t, const Vector& x0, std::size_t max_iter,
                       double tol_fix = 1e-10);

struct DiagnoseThresholds {
  double tol_fix = 1e-10;
  double reg_tol = 1e-3;
  /// |x_n| above this counts as escaping; unset means 10 (1 + |x0|).
  std::optional<double> norm_escape;
  double reg_floor = 1e-2;
  double window_fraction = 0.1;
  /// A trailing log-residual fit whose total change over the window is below this is "flat".
  double flat_log_change = 0.1;
  /// Bound on the summed trailing-window residuals (times 1 + |x_n|) for the Cauchy test.
  double cauchy_tol = 1e-6;
};

enum class Verdict {
  ConvergedToFixedPoint,
  AsymptoticallyRegularDivergent,
  NotAsymptoticallyRegular,
  BudgetExhausted,
};

std::string to_string(Verdict v);

struct Diagnosis {
  Verdict verdict = Verdict::BudgetExhausted;
  std::optional<Vector> fixed_point;  // set for ConvergedToFixedPoint
  double final_residual = 0.0;
  double final_norm = 0.0;
  double max_norm = 0.0;
  double residual_slope = 0.0;  // least-squares slope of log residual over the trailing window
  double norm_slope = 0.0;      // least-squares slope of the norm over the trailing window
  double fixed_point_residual = 0.0;  // |p - Tp|, re-evaluated
  double norm_escape = 0.0;
  std::size_t window = 0;
};

Diagnosis diagnose(const IterationTrace& trace, const FirmlyNonexpansiveMap& t,
                   const DiagnoseThresholds& thresholds = {});

struct RegularityReport {
  double min_sample_residual = 0.0;  // min over probes of |x - J_A x|, a proxy for dist(0, ran A)
  Diagnosis diagnosis;
  bool zero_in_range_closure = false;  // according to the samples
  bool orbit_regular = false;          // according to the iteration
  bool inconclusive = false;           // the iteration ran out of budget
  bool consistent = false;
};

/// Compares the sampled distance from 0 to ran A with the diagnosis of iterating J_A from the
/// first probe. `reg_tol` of the thresholds decides "0 in the closure of ran A".
RegularityReport check_resolvent_regularity(const MonotoneOperatorView& a, std::span<const Vector> probes,
                                            std::size_t max_iter = 10000,
                                            const DiagnoseThresholds& thresholds = {});

/// CSV: step,residual,norm[,x0,x1,...]. Coordinates are written only on rows whose iterate is
/// stored and only when `with_coordinates` is set.
void write_trace_csv(std::ostream& out, const IterationTrace& trace, bool with_coordinates = true);

}  // namespace opcalc
