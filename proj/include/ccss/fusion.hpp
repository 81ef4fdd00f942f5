// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Fusion-center statistics. The reporting hop is the real scalar channel
// y = u h + g with h a Nakagami envelope (severity m, scale sigma_v) and
// g ~ N(0, sigma_n^2); the conditional densities below are its exact
// marginals. Common notation: A = sigma_v^2 + sigma_n^2,
// B = sigma_v / (sigma_n sqrt(A)) = sqrt(alpha_sf)/sigma_n.
#ifndef CCSS_FUSION_HPP_
#define CCSS_FUSION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ccss/channels.hpp"
#include "ccss/quadrature.hpp"
#include "ccss/rng.hpp"
#include "ccss/specfun.hpp"

namespace ccss {
namespace fusion {

enum class FusionKind { lrt, egc, mrc, counting };

struct FusionRule {
  FusionKind kind = FusionKind::lrt;
  double lambda = 0.0;      // log-domain threshold for lrt/egc/mrc
  int count_threshold = 0;  // J for counting

  void validate(int k_total) const {
    if (kind == FusionKind::counting &&
        (count_threshold < 0 || count_threshold > k_total))
      throw std::domain_error("FusionRule: counting J must lie in [0, K]");
    if (!std::isfinite(lambda)) throw std::domain_error("FusionRule: lambda not finite");
  }
};

namespace detail {

struct RepParams {
  double a;   // sigma_v^2 + sigma_n^2
  double b;   // sigma_v / (sigma_n sqrt(A))
  double sn2; // sigma_n^2
};

inline RepParams rep_params(const channels::FadingLink& rep) {
  rep.validate();
  RepParams p;
  p.sn2 = rep.noise_sigma2;
  p.a = rep.sigma2 + rep.noise_sigma2;
  p.b = std::sqrt(rep.sigma2) / (std::sqrt(rep.noise_sigma2) * std::sqrt(p.a));
  return p;
}

inline void check_u(int u) {
  if (u != 1 && u != -1) throw std::domain_error("fusion: u must be +1 or -1");
}

}  // namespace detail

/// Conditional reporting density P(y|u) for the real-channel model. Closed
/// forms for m in {1/2, 1, 2}; any other severity falls back to direct
/// marginalization of the Nakagami envelope against the Gaussian kernel.
inline double report_density(double y, int u, const channels::FadingLink& rep) {
  detail::check_u(u);
  auto p = detail::rep_params(rep);
  const double m = rep.m;
  if (m == 1.0) {
    double t1 = std::sqrt(p.sn2) * std::exp(-y * y / (2.0 * p.sn2)) /
                (p.a * std::sqrt(2.0 * M_PI));
    double t2 = u * std::sqrt(p.sn2) * p.b * y / p.a * std::exp(-y * y / (2.0 * p.a)) *
                specfun::gaussian_q(-u * p.b * y);
    return t1 + t2;
  }
  if (m == 2.0) {
    double by = p.b * y;
    double c = std::pow(p.sn2, 1.5) / (2.0 * p.a * p.a);
    return c * ((2.0 + by * by) * std::exp(-y * y / (2.0 * p.sn2)) / std::sqrt(2.0 * M_PI) +
                u * by * (3.0 + by * by) * std::exp(-y * y / (2.0 * p.a)) *
                    specfun::gaussian_q(-u * p.b * y));
  }
  if (m == 0.5) {
    return std::exp(-y * y / (2.0 * p.a)) / std::sqrt(2.0 * M_PI * p.a) *
           (1.0 + std::erf(u * p.b * y / std::sqrt(2.0)));
  }
  // general m: integrate the envelope out
  const double sv2 = rep.sigma2;
  auto integrand = [&](double c) {
    if (c <= 0.0) return 0.0;
    double lognak = std::log(2.0) + (2.0 * m - 1.0) * std::log(c) -
                    specfun::ln_gamma(m) - m * std::log(2.0 * sv2) -
                    c * c / (2.0 * sv2);
    double d = y - u * c;
    double loggauss = -d * d / (2.0 * p.sn2) - 0.5 * std::log(2.0 * M_PI * p.sn2);
    return std::exp(lognak + loggauss);
  };
  return quadrature::integrate_to_inf(integrand, 0.0, 1e-11).value;
}

/// The reporting densities exactly as printed for m = 2 and m = 1/2 (both
/// misprints: the m=2 form is unnormalized and signed, the m=1/2 form is not
/// dimensionless). Retained only for comparison tests; m = 1 has no separate
/// literal form.
inline double report_density_literal(double y, int u, const channels::FadingLink& rep) {
  detail::check_u(u);
  auto p = detail::rep_params(rep);
  if (rep.m == 2.0) {
    double by = p.b * y;
    double c = std::pow(p.sn2, 1.5) * by / (2.0 * p.a * p.a);
    return c * (by * std::exp(-y * y / (2.0 * p.sn2)) / std::sqrt(2.0 * M_PI) +
                u * (2.0 + by * by) * std::exp(-y * y / (2.0 * p.a)) *
                    specfun::gaussian_q(-u * p.b * y));
  }
  if (rep.m == 0.5) {
    return std::exp(-y * y / (2.0 * p.a)) / std::sqrt(2.0 * M_PI * p.a) *
           (1.0 + std::sqrt(p.sn2 / 2.0) *
                      std::erf(u * y / (std::sqrt(p.sn2) * std::sqrt(2.0 * p.a))));
  }
  return report_density(y, u, rep);
}

/// Per-branch likelihoods (P(y|H0), P(y|H1)):
/// P(y|H0) = P(y|-1)(1-pf) + P(y|+1) pf and the same with pd under H1.
inline std::pair<double, double> branch_likelihoods(double y, double pd, double pf,
                                                    const channels::FadingLink& rep) {
  double pm1 = report_density(y, -1, rep);
  double pp1 = report_density(y, +1, rep);
  return {pm1 * (1.0 - pf) + pp1 * pf, pm1 * (1.0 - pd) + pp1 * pd};
}

enum class LrtRoute {
  density,              // generic: log P(y|H1) - log P(y|H0) from the densities
  closed_form,          // per-m closed forms consistent with the densities
  closed_form_literal,  // the forms exactly as printed (m=2 differs)
};

/// One branch's log likelihood ratio.
inline double branch_log_lr(double y, double pd, double pf,
                            const channels::FadingLink& rep, LrtRoute route) {
  auto p = detail::rep_params(rep);
  const double m = rep.m;
  if (route == LrtRoute::density || (route == LrtRoute::closed_form && m != 1.0 &&
                                     m != 2.0 && m != 0.5)) {
    auto [h0, h1] = branch_likelihoods(y, pd, pf, rep);
    return std::log(h1) - std::log(h0);
  }
  const double by = p.b * y;
  const double qby = specfun::gaussian_q(by);
  if (m == 1.0) {
    // numerator/denominator of the printed m=1 ratio, common factors dropped
    double g = std::exp(-y * y / (2.0 * p.sn2));
    double e = std::sqrt(2.0 * M_PI) * by * std::exp(-y * y / (2.0 * p.a));
    return std::log(g + (pd - qby) * e) - std::log(g + (pf - qby) * e);
  }
  if (m == 0.5) {
    double efv = (route == LrtRoute::closed_form_literal)
                     ? std::sqrt(p.sn2 / 2.0) *
                           std::erf(y / (std::sqrt(p.sn2) * std::sqrt(2.0 * p.a)))
                     : std::erf(by / std::sqrt(2.0));
    return std::log1p((2.0 * pd - 1.0) * efv) - std::log1p((2.0 * pf - 1.0) * efv);
  }
  // m == 2
  if (route == LrtRoute::closed_form_literal) {
    // as printed: R_n = 2 + B^2 y^2 rides only on the Q term
    double g = by * std::exp(-y * y / (2.0 * p.sn2));
    double e = std::sqrt(2.0 * M_PI) * (2.0 + by * by) * std::exp(-y * y / (2.0 * p.a));
    double num = g + (pd - qby) * e;
    double den = g + (pf - qby) * e;
    return std::log(num) - std::log(den);  // NaN when the printed form goes negative
  }
  double g = (2.0 + by * by) * std::exp(-y * y / (2.0 * p.sn2)) / std::sqrt(2.0 * M_PI);
  double e = by * (3.0 + by * by) * std::exp(-y * y / (2.0 * p.a));
  return std::log(g + (pd - qby) * e) - std::log(g + (pf - qby) * e);
}

/// Per-SU inputs to the fusion statistics.
struct SuStats {
  double pd = 0.5;
  double pf = 0.5;
  channels::FadingLink reporting;
};

/// Log-domain LRT statistic log L(y_1..y_K).
inline double log_lrt_statistic(std::span<const double> y,
                                std::span<const SuStats> su,
                                LrtRoute route = LrtRoute::density) {
  if (y.size() != su.size()) throw std::invalid_argument("log_lrt_statistic: size mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k)
    acc += branch_log_lr(y[k], su[k].pd, su[k].pf, su[k].reporting, route);
  return acc;
}

/// Equal-gain combining: sum of received scalars.
inline double egc_statistic(std::span<const double> y) {
  double s = 0.0;
  for (double v : y) s += v;
  return s;
}

/// Maximum-ratio combining with per-link weights (sqrt(alpha_sf) by default
/// elsewhere; weights are explicit here).
inline double mrc_statistic(std::span<const double> y, std::span<const double> weights) {
  if (y.size() != weights.size()) throw std::invalid_argument("mrc_statistic: size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) s += weights[k] * y[k];
  return s;
}

/// Counting (J-out-of-K) rule over hard decisions; +1 when at least J
/// reports are non-negative votes.
inline int counting_fuse(std::span<const int> u, int j_threshold) {
  if (j_threshold < 0 || j_threshold > static_cast<int>(u.size()))
    throw std::domain_error("counting_fuse: J must lie in [0, K]");
  int count = 0;
  for (int v : u) {
    if (v != 1 && v != -1) throw std::domain_error("counting_fuse: u must be +-1");
    if (v == 1) ++count;
  }
  return count >= j_threshold ? 1 : -1;
}

struct LambdaEstimate {
  double lambda = 0.0;
  double ci_lo = 0.0;   // bootstrap 95% interval
  double ci_hi = 0.0;
  double achieved_pf = 0.0;  // empirical tail mass at lambda on the input sample
  long trials = 0;
};

/// Empirical (1 - target_pf) quantile of an H0 statistic sample, with a
/// percentile-bootstrap confidence interval. Errors out when the expected
/// tail count target_pf * trials falls below 50.
inline LambdaEstimate calibrate_lambda_from_samples(std::vector<double> h0_stats,
                                                    double target_pf,
                                                    uint64_t boot_seed = 1,
                                                    int boot_rounds = 200) {
  if (!(target_pf > 0.0 && target_pf < 1.0))
    throw std::domain_error("calibrate_lambda: target_pf in (0,1)");
  const long n = static_cast<long>(h0_stats.size());
  if (static_cast<double>(n) * target_pf < 50.0)
    throw std::domain_error("calibrate_lambda: expected tail count below 50; add trials");

  auto quantile_of = [&](std::vector<double>& v) {
    long idx = static_cast<long>(std::ceil((1.0 - target_pf) * n)) - 1;
    idx = std::clamp(idx, 0L, n - 1);
    std::nth_element(v.begin(), v.begin() + idx, v.end());
    return v[idx];
  };

  LambdaEstimate est;
  est.trials = n;
  std::vector<double> work = h0_stats;
  est.lambda = quantile_of(work);
  long above = 0;
  for (double v : h0_stats)
    if (v > est.lambda) ++above;
  est.achieved_pf = static_cast<double>(above) / static_cast<double>(n);

  std::vector<double> boot(boot_rounds);
  rng::Stream rs(boot_seed, 0xB007, 0);
  std::vector<double> sample(n);
  for (int b = 0; b < boot_rounds; ++b) {
    for (long i = 0; i < n; ++i)
      sample[i] = h0_stats[static_cast<std::size_t>(rs.uniform01() * n)];
    boot[b] = quantile_of(sample);
  }
  std::sort(boot.begin(), boot.end());
  est.ci_lo = boot[static_cast<int>(0.025 * (boot_rounds - 1))];
  est.ci_hi = boot[static_cast<int>(0.975 * (boot_rounds - 1))];
  return est;
}

}  // namespace fusion
}  // namespace ccss

#endif  // CCSS_FUSION_HPP_
