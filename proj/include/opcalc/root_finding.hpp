#pragma once

#include <functional>
#include <limits>
#include <string>

namespace opcalc {

/// Settings shared by every 1-D solve in the toolkit (epigraph projection, smooth prox).
struct RootOptions {
  int max_iterations = 200;
  int max_expansions = 64;      // bracket doublings before giving up
  double tolerance = 1e-12;     // |g(x)| target
  double initial_step = 1.0;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // g(root)
  int iterations = 0;
};

/// Solve g(x) = 0 for g continuous and crossing zero from below to above.
///
/// Starting at `guess`, the bracket is expanded by doubling the step toward the sign change
/// (never past [lower, upper]); the root is then polished by Newton steps, falling back to
/// bisection whenever a step leaves the bracket or fails to halve |g|.
/// Throws NumericalFailure with a diagnostic when no sign change is found.
RootResult solve_increasing(const std::function<double(double)>& g,
                            const std::function<double(double)>& dg, double guess,
                            const RootOptions& options = {},
                            double lower = -std::numeric_limits<double>::infinity(),
                            double upper = std::numeric_limits<double>::infinity());

}  // namespace opcalc
