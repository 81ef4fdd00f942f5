// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
#ifndef CCSS_QUADRATURE_HPP_
#define CCSS_QUADRATURE_HPP_

#include <cmath>
#include <stdexcept>

namespace ccss {
namespace quadrature {

struct Result {
  double value = 0.0;
  double est_error = 0.0;
  long evaluations = 0;
};

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
void adapt(F&& f, double a, double b, double fa, double fm, double fb, double whole,
           double abs_tol, int depth, Result& out) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  out.evaluations += 2;
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * abs_tol) {
    out.value += left + right + delta / 15.0;
    out.est_error += std::fabs(delta) / 15.0;
    return;
  }
  adapt(f, a, m, fa, flm, fm, left, abs_tol / 2.0, depth - 1, out);
  adapt(f, m, b, fm, frm, fb, right, abs_tol / 2.0, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson on [a,b].
template <typename F>
Result integrate(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 50) {
  Result out;
  if (a == b) return out;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  out.evaluations = 3;
  double whole = detail::simpson(a, b, fa, fm, fb);
  detail::adapt(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, out);
  return out;
}

/// Adaptive Simpson on [a, +inf) via u -> a + u/(1-u).
template <typename F>
Result integrate_to_inf(F&& f, double a, double abs_tol = 1e-10, int max_depth = 50) {
  auto g = [&](double u) {
    if (u >= 1.0) return 0.0;
    double t = a + u / (1.0 - u);
    double jac = 1.0 / ((1.0 - u) * (1.0 - u));
    double v = f(t) * jac;
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(g, 0.0, 1.0, abs_tol, max_depth);
}

/// Adaptive Simpson over the whole real line via two half-lines.
template <typename F>
Result integrate_real_line(F&& f, double abs_tol = 1e-10, int max_depth = 50) {
  Result pos = integrate_to_inf(f, 0.0, abs_tol / 2.0, max_depth);
  Result neg = integrate_to_inf([&](double t) { return f(-t); }, 0.0, abs_tol / 2.0, max_depth);
  pos.value += neg.value;
  pos.est_error += neg.est_error;
  pos.evaluations += neg.evaluations;
  return pos;
}

}  // namespace quadrature
}  // namespace ccss

#endif  // CCSS_QUADRATURE_HPP_
