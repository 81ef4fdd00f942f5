// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
#ifndef CCSS_SPECFUN_HPP_
#define CCSS_SPECFUN_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ccss {
namespace specfun {

/// Outcome of a truncated-series evaluation.
struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;
  bool converged = false;
  double est_abs_error = 0.0;
};

namespace detail {

constexpr int kSeriesCap = 10000;        // hard cap on series terms
constexpr double kRelStop = 1e-15;       // |term| < kRelStop*|sum|, 3 in a row
constexpr double kTiny = 1e-300;

[[noreturn]] inline void domain_fail(const std::string& what) {
  throw std::domain_error("specfun: " + what);
}

// Regularized lower incomplete gamma by power series; valid for x < a+1.
inline double lower_gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kSeriesCap; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by modified Lentz continued fraction;
// valid for x >= a+1.
inline double upper_gamma_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kSeriesCap; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-17) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Inverse standard-normal upper-tail quantile, |error| ~ 1e-15 after one
// Halley refinement of Acklam's rational approximation. Used only for
// starting guesses.
inline double probit_upper(double q) {
  double p = 1.0 - q;  // lower-tail probability
  static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double z;
  if (p < plow) {
    double u = std::sqrt(-2.0 * std::log(p));
    z = (((((C[0] * u + C[1]) * u + C[2]) * u + C[3]) * u + C[4]) * u + C[5]) /
        ((((D[0] * u + D[1]) * u + D[2]) * u + D[3]) * u + 1.0);
  } else if (p <= 1.0 - plow) {
    double u = p - 0.5, r = u * u;
    z = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * u /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    double u = std::sqrt(-2.0 * std::log(1.0 - p));
    z = -(((((C[0] * u + C[1]) * u + C[2]) * u + C[3]) * u + C[4]) * u + C[5]) /
        ((((D[0] * u + D[1]) * u + D[2]) * u + D[3]) * u + 1.0);
  }
  // one Halley step against erfc
  double e = 0.5 * std::erfc(-z / std::sqrt(2.0)) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(z * z / 2.0);
  z = z - u / (1.0 + z * u / 2.0);
  return z;
}

}  // namespace detail

/// log Gamma(x) for x > 0.
inline double ln_gamma(double x) {
  if (!(x > 0.0)) detail::domain_fail("ln_gamma requires x > 0");
  return std::lgamma(x);
}

/// Gaussian upper-tail probability Q(x).
inline double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

inline double erf(double x) { return std::erf(x); }

/// Rising factorial (a)_n.
inline double pochhammer(double a, int n) {
  if (n < 0) detail::domain_fail("pochhammer requires n >= 0");
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= a + i;
  return r;
}

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
inline double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) detail::domain_fail("reg_lower_gamma requires a > 0");
  if (x < 0.0) detail::domain_fail("reg_lower_gamma requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::lower_gamma_series(a, x);
  return 1.0 - detail::upper_gamma_cf(a, x);
}

/// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
inline double reg_upper_gamma(double a, double x) {
  if (!(a > 0.0)) detail::domain_fail("reg_upper_gamma requires a > 0");
  if (x < 0.0) detail::domain_fail("reg_upper_gamma requires x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::lower_gamma_series(a, x);
  return detail::upper_gamma_cf(a, x);
}

/// Solves Q(a,x) = q for x, q in (0,1). Bracketed Newton with bisection
/// fallback; terminates when |Q(a,x)-q| <= 1e-13 or the bracket collapses.
inline double inv_reg_upper_gamma(double a, double q) {
  if (!(a > 0.0)) detail::domain_fail("inv_reg_upper_gamma requires a > 0");
  if (!(q > 0.0 && q < 1.0)) detail::domain_fail("inv_reg_upper_gamma requires 0 < q < 1");

  // Wilson-Hilferty starting guess, clipped into the positive axis.
  double z = detail::probit_upper(q);
  double t = 1.0 - 1.0 / (9.0 * a) + z * std::sqrt(1.0 / (9.0 * a));
  double x = (t > 0.0) ? a * t * t * t : std::exp((std::log(1.0 - q) + std::lgamma(a + 1.0)) / a);
  if (!(x > 0.0) || !std::isfinite(x)) x = a;

  // bracket by doubling/halving
  double lo = 0.0, hi = x;
  if (reg_upper_gamma(a, x) > q) {
    lo = x;
    hi = std::max(2.0 * x, 1.0);
    while (reg_upper_gamma(a, hi) > q) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e308) detail::domain_fail("inv_reg_upper_gamma failed to bracket");
    }
  } else {
    hi = x;
    lo = x / 2.0;
    while (reg_upper_gamma(a, lo) <= q) {
      hi = lo;
      lo /= 2.0;
      if (lo < 1e-308) { lo = 0.0; break; }
    }
  }

  x = 0.5 * (lo + hi);
  const double lg = std::lgamma(a);
  for (int it = 0; it < 200; ++it) {
    double f = reg_upper_gamma(a, x) - q;
    if (std::fabs(f) <= 1e-13) break;
    if (f > 0.0) lo = x; else hi = x;
    // Q'(a,x) = -x^(a-1) e^-x / Gamma(a)
    double dq = -std::exp((a - 1.0) * std::log(x) - x - lg);
    double xn = (dq != 0.0) ? x - f / dq : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) break;
    x = xn;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return x;
}

/// Confluent hypergeometric 1F1(a;b;x) by ascending series. Negative
/// arguments are routed through the Kummer transform
/// 1F1(a;b;x) = e^x 1F1(b-a;b;-x) so the summed series keeps positive
/// arguments and avoids cancellation.
inline SeriesResult kummer_1f1(double a, double b, double x) {
  if (b <= 0.0 && b == std::floor(b)) detail::domain_fail("kummer_1f1: b is a non-positive integer");
  SeriesResult r;
  if (x == 0.0) {
    r.value = 1.0;
    r.converged = true;
    r.terms_used = 1;
    return r;
  }
  if (x < 0.0) {
    SeriesResult inner = kummer_1f1(b - a, b, -x);
    inner.value *= std::exp(x);
    inner.est_abs_error *= std::exp(x);
    return inner;
  }
  double term = 1.0, sum = 1.0;
  int streak = 0;
  int k = 0;
  for (; k < detail::kSeriesCap; ++k) {
    term *= (a + k) * x / ((b + k) * (k + 1));
    sum += term;
    if (std::fabs(term) < detail::kRelStop * std::fabs(sum)) {
      if (++streak >= 3) break;
    } else {
      streak = 0;
    }
  }
  r.value = sum;
  r.terms_used = k + 1;
  r.converged = streak >= 3;
  // once the term ratio drops below 1 the tail is geometrically bounded
  double ratio = std::fabs((a + k) * x / ((b + k) * (k + 1)));
  r.est_abs_error = (ratio < 1.0) ? std::fabs(term) * ratio / (1.0 - ratio)
                                  : std::fabs(term);
  return r;
}

/// Humbert Phi2(b1,b2;c;x,y) = sum_{i,j} (b1)_i (b2)_j x^i y^j / ((c)_{i+j} i! j!),
/// evaluated as the single series sum_i (b1)_i x^i / (i! (c)_i) * 1F1(b2; c+i; y).
inline SeriesResult humbert_phi2(double b1, double b2, double c, double x, double y) {
  if (c <= 0.0 && c == std::floor(c)) detail::domain_fail("humbert_phi2: c is a non-positive integer");
  SeriesResult r;
  double w = 1.0;  // (b1)_i x^i / (i! (c)_i)
  double sum = 0.0;
  int streak = 0;
  int inner_terms = 0;
  int i = 0;
  for (; i < detail::kSeriesCap; ++i) {
    SeriesResult f = kummer_1f1(b2, c + i, y);
    inner_terms += f.terms_used;
    double term = w * f.value;
    sum += term;
    if (std::fabs(term) < detail::kRelStop * std::fabs(sum) && i > 0) {
      if (++streak >= 3) break;
    } else {
      streak = 0;
    }
    w *= (b1 + i) * x / ((c + i) * (i + 1));
  }
  r.value = sum;
  r.terms_used = i + 1;
  r.converged = streak >= 3;
  r.est_abs_error = std::fabs(w) * std::max(1.0, std::fabs(sum)) * 10.0 *
                    std::numeric_limits<double>::epsilon() * r.terms_used +
                    std::fabs(w);
  return r;
}

/// Generalized Marcum Q_N(a,b): Poisson-weighted sum of regularized upper
/// gammas, expanded symmetrically around the Poisson mode until the
/// remaining weight is below 1e-15.
inline double marcum_q(int order, double a, double b) {
  if (order < 1) detail::domain_fail("marcum_q requires order >= 1");
  if (a < 0.0 || b < 0.0) detail::domain_fail("marcum_q requires a,b >= 0");
  if (b == 0.0) return 1.0;
  const double lam = 0.5 * a * a;  // Poisson mean
  const double y = 0.5 * b * b;
  if (lam == 0.0) return reg_upper_gamma(static_cast<double>(order), y);

  const int j0 = static_cast<int>(lam);
  // center values
  double p_up = std::exp(-lam + j0 * std::log(lam) - std::lgamma(j0 + 1.0));
  double q_up = reg_upper_gamma(static_cast<double>(order + j0), y);
  // Poisson term of the gamma recurrence at shape order+j0:
  // Q(s+1,y) = Q(s,y) + y^s e^-y / Gamma(s+1)
  double g_up = std::exp((order + j0) * std::log(y) - y - std::lgamma(order + j0 + 1.0));

  double sum = p_up * q_up;
  double mass = p_up;

  double p_dn = p_up, q_dn = q_up, g_dn = g_up;
  int ju = j0, jd = j0;
  for (int it = 0; it < 2 * detail::kSeriesCap; ++it) {
    bool moved = false;
    if (1.0 - mass <= 1e-15) break;
    // upward step
    {
      p_up *= lam / (ju + 1.0);
      q_up += g_up;
      g_up *= y / (order + ju + 1.0);
      ++ju;
      sum += p_up * q_up;
      mass += p_up;
      moved = true;
    }
    // downward step
    if (jd > 0) {
      g_dn *= (order + jd) / y;
      q_dn -= g_dn;
      if (q_dn < 0.0) q_dn = 0.0;
      p_dn *= jd / lam;
      --jd;
      sum += p_dn * q_dn;
      mass += p_dn;
      moved = true;
    }
    if (!moved) break;
  }
  if (sum < 0.0) sum = 0.0;
  if (sum > 1.0) sum = 1.0;
  return sum;
}

}  // namespace specfun
}  // namespace ccss

#endif  // CCSS_SPECFUN_HPP_
