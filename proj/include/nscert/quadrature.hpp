#pragma once

#include <cmath>
#include <functional>

namespace nscert {

namespace quadrature_detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double recurse(const std::function<double(double)>& f, double a, double fa, double b,
                      double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace quadrature_detail

/// Adaptive Simpson quadrature with a relative tolerance (plus a tiny absolute
/// floor so that identically-zero integrands terminate immediately).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-10, int max_depth = 48) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = quadrature_detail::simpson(a, b, fa, fm, fb);
  const double scale = std::abs(whole) + (std::abs(b - a)) * (std::abs(fa) + std::abs(fm) + std::abs(fb)) / 3.0;
  const double tol = rel_tol * scale + 1e-300;
  return quadrature_detail::recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace nscert
