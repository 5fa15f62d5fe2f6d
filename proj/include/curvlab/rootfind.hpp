#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace curvlab {

// Bisection on a bracketing interval. Tolerance is absolute in the argument.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol_x = 1e-13, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < max_iter && (b - a) > tol_x; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Golden-section minimizer for a unimodal-enough function; used to polish a
// grid minimum, so a few dozen iterations suffice.
inline double golden_minimize(const std::function<double(double)>& f, double a,
                              double b, double tol_x = 1e-12) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while ((b - a) > tol_x) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace curvlab
