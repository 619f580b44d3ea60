#pragma once

// Test-only reference computations, independent of the library's
// incomplete-beta route.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace divsim::oracle {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps,
                               int depth = 60) {
  auto simpson = [&](double l, double r, double fl, double fm, double fr) {
    return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
  };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, double tol, int d) -> double {
    const double m = 0.5 * (l + r);
    const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(l, m, fl, flm, fm), right = simpson(m, r, fm, frm, fr);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return rec(l, m, fl, flm, fm, left, tol / 2.0, d - 1) + rec(m, r, fm, frm, fr, right, tol / 2.0, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), eps, depth);
}

inline double t_density(double x, double df) {
  const double logc = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * std::numbers::pi);
  return std::exp(logc - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

/// P(T > t) by integrating the density over [0, |t|].
inline double t_sf_quadrature(double t, double df) {
  const double mass = adaptive_simpson([df](double x) { return t_density(x, df); }, 0.0, std::abs(t), 1e-13);
  return t >= 0 ? 0.5 - mass : 0.5 + mass;
}

inline double f_density(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double logc = std::lgamma((d1 + d2) / 2.0) - std::lgamma(d1 / 2.0) - std::lgamma(d2 / 2.0) +
                      d1 / 2.0 * std::log(d1 / d2);
  return std::exp(logc + (d1 / 2.0 - 1.0) * std::log(x) - (d1 + d2) / 2.0 * std::log1p(d1 * x / d2));
}

/// P(F > f). Substituting x = u^2 removes the d1 = 1 singularity at zero.
inline double f_sf_quadrature(double f, double d1, double d2) {
  const double mass = adaptive_simpson(
      [d1, d2](double u) {
        u = std::max(u, 1e-150);  // the integrand has a finite limit at 0
        return 2.0 * u * f_density(u * u, d1, d2);
      },
      0.0,
      std::sqrt(f), 1e-13);
  return 1.0 - mass;
}

}  // namespace divsim::oracle
