#include "opcalc/root_finding.hpp"

#include "opcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opcalc {

namespace {

bool collapsed(double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  return mid <= lo || mid >= hi;
}

}  // namespace

RootResult solve_increasing(const std::function<double(double)>& g,
                            const std::function<double(double)>& dg, double guess,
                            const RootOptions& options, double lower, double upper) {
  if (!std::isfinite(guess)) throw InvalidArgument("solve_increasing: non-finite start");
  guess = std::clamp(guess, lower, upper);

  double g0 = g(guess);
  if (!std::isfinite(g0)) throw NumericalFailure("solve_increasing: g is not finite at start");
  if (g0 == 0.0) return {guess, 0.0, 0};

  // Expand toward the sign change.
  double lo = guess, hi = guess;
  double glo = g0, ghi = g0;
  double step = options.initial_step;
  int expansions = 0;
  if (g0 > 0.0) {
    while (glo > 0.0) {
      if (++expansions > options.max_expansions || lo <= lower) {
        std::ostringstream msg;
        msg << "solve_increasing: no sign change below " << guess << " after " << expansions - 1
            << " expansions (last g(" << lo << ") = " << glo << ")";
        throw NumericalFailure(msg.str());
      }
      hi = lo;
      ghi = glo;
      lo = std::max(guess - step, lower);
      glo = g(lo);
      step *= 2.0;
    }
  } else {
    while (ghi < 0.0) {
      if (++expansions > options.max_expansions || hi >= upper) {
        std::ostringstream msg;
        msg << "solve_increasing: no sign change above " << guess << " after " << expansions - 1
            << " expansions (last g(" << hi << ") = " << ghi << ")";
        throw NumericalFailure(msg.str());
      }
      lo = hi;
      glo = ghi;
      hi = std::min(guess + step, upper);
      ghi = g(hi);
      step *= 2.0;
    }
  }
  if (glo == 0.0) return {lo, 0.0, 0};
  if (ghi == 0.0) return {hi, 0.0, 0};

  // Safeguarded Newton inside [lo, hi] with g(lo) < 0 < g(hi).
  double x = (std::abs(glo) < std::abs(ghi)) ? lo : hi;
  double gx = (x == lo) ? glo : ghi;
  double best_x = x, best_g = gx;
  for (int it = 1; it <= options.max_iterations; ++it) {
    double next;
    const double slope = dg(x);
    const double newton = (slope > 0.0 && std::isfinite(slope)) ? x - gx / slope : lo - 1.0;
    if (newton > lo && newton < hi) {
      next = newton;
    } else {
      next = 0.5 * (lo + hi);
    }
    double gn = g(next);
    if (!std::isfinite(gn)) throw NumericalFailure("solve_increasing: g is not finite inside bracket");
    // Bisect instead when Newton did not halve the residual.
    if (next == newton && std::abs(gn) > 0.5 * std::abs(gx)) {
      if (gn < 0.0) { lo = next; } else { hi = next; }
      next = 0.5 * (lo + hi);
      gn = g(next);
    }
    if (gn < 0.0) {
      lo = next;
    } else if (gn > 0.0) {
      hi = next;
    }
    x = next;
    gx = gn;
    if (std::abs(gx) < std::abs(best_g)) {
      best_x = x;
      best_g = gx;
    }
    if (std::abs(gx) <= options.tolerance || gx == 0.0 || collapsed(lo, hi)) {
      return {best_x, best_g, it};
    }
  }
  return {best_x, best_g, options.max_iterations};
}

}  // namespace opcalc
