// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// System-level closed forms for the identical-detector, sign-quantized
// report model: success probabilities, binomial P_D/P_F, total error and
// the optimal cooperating-SU count.
#ifndef CCSS_SYSPERF_HPP_
#define CCSS_SYSPERF_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccss/channels.hpp"
#include "ccss/fusion.hpp"
#include "ccss/quadrature.hpp"

namespace ccss {
namespace sysperf {

/// Probabilities that a received report is non-negative under H1 / H0.
struct SuccessProbs {
  double p1 = 0.5;
  double p0 = 0.5;
  double m = 1.0;  // severity of the reporting links
};

/// m = 1 closed form: p = 1/2 + (p_local - 1/2) sqrt(alpha_sf).
inline SuccessProbs success_probs_m1(double pd, double pf,
                                     const channels::FadingLink& rep) {
  rep.validate();
  if (rep.m != 1.0) throw std::domain_error("success_probs_m1 requires m = 1");
  double s = std::sqrt(rep.alpha());
  return {0.5 + (pd - 0.5) * s, 0.5 + (pf - 0.5) * s, 1.0};
}

namespace detail {

// P(y >= 0 | u = +1) by quadrature of the reporting density.
inline double prob_nonnegative_given_plus(const channels::FadingLink& rep) {
  return quadrature::integrate_to_inf(
             [&](double y) { return fusion::report_density(y, +1, rep); }, 0.0, 1e-11)
      .value;
}

}  // namespace detail

/// m = 2 success probabilities. Default: quadrature of the reporting density
/// over [0, inf). The printed expression (first term not dimensionless) sits
/// behind `literal = true` for the comparison tests.
inline SuccessProbs success_probs_m2(double pd, double pf,
                                     const channels::FadingLink& rep,
                                     bool literal = false) {
  rep.validate();
  if (rep.m != 2.0) throw std::domain_error("success_probs_m2 requires m = 2");
  if (literal) {
    double sv2 = rep.sigma2, sn2 = rep.noise_sigma2;
    double sv = std::sqrt(sv2), sn = std::sqrt(sn2);
    double a = sv2 + sn2;
    double first = sv2 / (a * a) * (sv2 / (2.0 * sn) + sn);
    return {first + (pd - 0.5) * sv / (sn * std::sqrt(a)),
            first + (pf - 0.5) * sv / (sn * std::sqrt(a)), 2.0};
  }
  double q = detail::prob_nonnegative_given_plus(rep);
  return {(1.0 - pd) * (1.0 - q) + pd * q, (1.0 - pf) * (1.0 - q) + pf * q, 2.0};
}

namespace detail {

// Binomial upper tail sum_{j=K1}^{K} C(K,j) p^j (1-p)^(K-j), summed in log
// space from whichever tail has fewer terms.
inline double binom_upper_tail(int k_total, int k1, double p) {
  if (k1 < 0 || k1 > k_total) throw std::domain_error("binomial tail: K1 in [0, K]");
  if (k1 == 0) return 1.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;

  auto log_term = [&](int j) {
    return std::lgamma(k_total + 1.0) - std::lgamma(j + 1.0) -
           std::lgamma(k_total - j + 1.0) + j * std::log(p) +
           (k_total - j) * std::log1p(-p);
  };
  auto log_sum = [&](int lo, int hi) {
    double mx = -1e308;
    for (int j = lo; j <= hi; ++j) mx = std::max(mx, log_term(j));
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += std::exp(log_term(j) - mx);
    return mx + std::log(s);
  };

  int upper_terms = k_total - k1 + 1;
  int lower_terms = k1;
  if (upper_terms <= lower_terms) return std::exp(log_sum(k1, k_total));
  double lower = std::exp(log_sum(0, k1 - 1));
  return lower >= 1.0 ? 0.0 : 1.0 - lower;
}

}  // namespace detail

/// System detection probability for the K1-out-of-K rule.
inline double system_pd(int k_total, int k1, double p1) {
  return detail::binom_upper_tail(k_total, k1, p1);
}

/// Counting-rule tail for per-SU success probabilities (exact convolution);
/// reduces to the binomial tail when all entries agree. Used for the analytic
/// overlay on heterogeneous scenarios.
inline double heterogeneous_counting_tail(const std::vector<double>& ps, int k1) {
  const int k_total = static_cast<int>(ps.size());
  if (k1 < 0 || k1 > k_total) throw std::domain_error("counting tail: K1 in [0, K]");
  std::vector<double> dp(static_cast<std::size_t>(k_total) + 1, 0.0);
  dp[0] = 1.0;
  for (double p : ps) {
    for (int j = k_total; j >= 1; --j) dp[j] = dp[j] * (1.0 - p) + dp[j - 1] * p;
    dp[0] *= (1.0 - p);
  }
  double tail = 0.0;
  for (int j = k1; j <= k_total; ++j) tail += dp[j];
  return std::min(1.0, std::max(0.0, tail));
}

/// System false-alarm probability for the K1-out-of-K rule.
inline double system_pf(int k_total, int k1, double p0) {
  return detail::binom_upper_tail(k_total, k1, p0);
}

struct SystemOperatingPoint {
  int k_total = 0;
  int k1 = 0;
  double p_d = 0.0, p_f = 0.0, p_m = 0.0, p_tot = 0.0;
};

inline SystemOperatingPoint system_point(int k_total, int k1, double p1, double p0) {
  SystemOperatingPoint s;
  s.k_total = k_total;
  s.k1 = k1;
  s.p_d = system_pd(k_total, k1, p1);
  s.p_f = system_pf(k_total, k1, p0);
  s.p_m = 1.0 - s.p_d;
  s.p_tot = s.p_m + s.p_f;
  return s;
}

/// Total error P_M + P_F at count threshold l.
inline double total_error(int k_total, int l, double p1, double p0) {
  return system_point(k_total, l, p1, p0).p_tot;
}

/// Optimal cooperating-SU count: ceil(K / (1 + beta)),
/// beta = ln(p1/p0) / ln((1-p0)/(1-p1)), clamped to [1, K].
inline int optimal_l(int k_total, double p1, double p0) {
  if (k_total < 1) throw std::domain_error("optimal_l: K >= 1");
  if (!(p0 > 0.0 && p1 < 1.0 && p1 > p0))
    throw std::domain_error("optimal_l requires 1 > p1 > p0 > 0");
  double beta = std::log(p1 / p0) / std::log((1.0 - p0) / (1.0 - p1));
  int l = static_cast<int>(std::ceil(k_total / (1.0 + beta)));
  if (l < 1) l = 1;
  if (l > k_total) l = k_total;
  return l;
}

}  // namespace sysperf
}  // namespace ccss

#endif  // CCSS_SYSPERF_HPP_
