#pragma once

#include <cmath>
#include <numbers>

#include "apptsched/errors.hpp"

namespace apptsched::numerics {

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Phi(x) through erfc, which keeps full relative accuracy in the lower tail.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// 1 - Phi(x) without cancellation.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Mills ratio (1 - Phi(x)) / phi(x). Continued fraction once phi underflows
// would spoil the direct quotient.
inline double mills_ratio(double x) {
  if (x < 8.0) return normal_sf(x) / normal_pdf(x);
  // Lentz evaluation of 1/(x + 1/(x + 2/(x + 3/(x + ...)))).
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 200; ++k) {
    d = x + k * d;
    if (d == 0.0) d = tiny;
    c = x + k / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth, bool& ok) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= 1e-15 * std::abs(left + right)) return left + right + delta / 15.0;
  if (depth <= 0) {
    ok = false;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, ok) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, ok);
}

}  // namespace detail

// Adaptive Simpson on [a, b] with absolute tolerance `tol`. The interval is
// first cut into `panels` equal pieces so narrow features are not skipped.
// Throws NumericalError if the depth limit is hit or the result is not finite.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int panels = 16, int max_depth = 40) {
  if (!(b > a)) return 0.0;
  const double width = (b - a) / panels;
  double total = 0.0;
  bool ok = true;
  double x0 = a;
  double f0 = f(a);
  for (int j = 0; j < panels; ++j) {
    const double x1 = (j + 1 == panels) ? b : a + (j + 1) * width;
    const double xm = 0.5 * (x0 + x1);
    const double fm = f(xm);
    const double f1 = f(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += detail::simpson_step(f, x0, x1, f0, fm, f1, whole, tol / panels, max_depth, ok);
    x0 = x1;
    f0 = f1;
  }
  if (!ok) throw NumericalError("adaptive quadrature did not reach the requested tolerance");
  if (!std::isfinite(total)) throw NumericalError("quadrature produced a non-finite value");
  return total;
}

}  // namespace apptsched::numerics
