#pragma once

#include <cmath>
#include <span>
#include <utility>

#include "hetphase/errors.hpp"

namespace hetphase {

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double abs_tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * abs_tol)
    return left + right + delta / 15.0;
  if (depth <= 0)
    throw ConvergenceError("adaptive Simpson quadrature: depth exhausted");
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * abs_tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * abs_tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson integration of f over [a, b] to the given absolute
/// tolerance. Throws ConvergenceError if the recursion depth is exhausted.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

/// Adaptive Simpson over a piecewise partition; breakpoints must be
/// increasing. The tolerance is split evenly across segments, which keeps
/// sharply peaked integrands (one busy segment, many quiet ones) cheap.
template <typename F>
double integrate_segments(F&& f, std::span<const double> breakpoints, double abs_tol,
                          int max_depth = 48) {
  double total = 0.0;
  if (breakpoints.size() < 2) return total;
  const double seg_tol = abs_tol / static_cast<double>(breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    total += adaptive_simpson(f, breakpoints[i], breakpoints[i + 1], seg_tol, max_depth);
  return total;
}

} // namespace hetphase
