// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Energy-detector analytics at a single secondary user. Conventions:
// the test statistic is t = sum_{n=1..N} |x(n)|^2 and every incomplete-gamma
// argument is x = tau / (2 sigma_w^2).
#ifndef CCSS_LOCAL_DETECT_HPP_
#define CCSS_LOCAL_DETECT_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccss/channels.hpp"
#include "ccss/quadrature.hpp"
#include "ccss/specfun.hpp"

namespace ccss {
namespace local_detect {

/// Per-SU energy detector configuration.
struct DetectorSpec {
  int n_samples = 10;          // N, complex samples per sensing window
  double target_pf = 0.1;
  double noise_sigma2 = 1.0;   // sigma_w^2
  double tau = 0.0;            // energy threshold

  void validate() const {
    if (n_samples < 1) throw std::domain_error("DetectorSpec: n_samples >= 1");
    if (!(noise_sigma2 > 0.0)) throw std::domain_error("DetectorSpec: noise_sigma2 > 0");
    if (!(tau >= 0.0)) throw std::domain_error("DetectorSpec: tau >= 0");
  }
};

enum class PdModel { phi2_general, m_half, m_one, m_two, complex_regime, monte_carlo };

inline const char* to_string(PdModel m) {
  switch (m) {
    case PdModel::phi2_general: return "phi2";
    case PdModel::m_half: return "m_half";
    case PdModel::m_one: return "m_one";
    case PdModel::m_two: return "m_two";
    case PdModel::complex_regime: return "complex";
    case PdModel::monte_carlo: return "mc";
  }
  return "?";
}

/// One (pf, pd) point. pm is stored as 1 - pd.
struct LocalOperatingPoint {
  double pf = 0.0;
  double pd = 0.0;
  double pm = 1.0;
  PdModel model = PdModel::phi2_general;
  double clamp_excess = 0.0;  // how far a series result overshot [0,1]
};

namespace detail {

inline LocalOperatingPoint make_point(double pf, double pd_raw, PdModel model) {
  LocalOperatingPoint p;
  p.pf = pf;
  p.model = model;
  double pd = pd_raw;
  double excess = 0.0;
  if (pd < 0.0) { excess = -pd; pd = 0.0; }
  if (pd > 1.0) { excess = pd - 1.0; pd = 1.0; }
  p.pd = pd;
  p.pm = 1.0 - pd;
  p.clamp_excess = excess;
  return p;
}

}  // namespace detail

/// Probability of false alarm Q(N, tau/(2 sigma_w^2)).
inline double pf_from_threshold(int n_samples, double noise_sigma2, double tau) {
  if (tau < 0.0) throw std::domain_error("pf_from_threshold: tau >= 0");
  return specfun::reg_upper_gamma(static_cast<double>(n_samples),
                                  tau / (2.0 * noise_sigma2));
}

/// Threshold for a target false-alarm probability.
inline double threshold_from_pf(int n_samples, double noise_sigma2, double pf) {
  if (!(pf > 0.0 && pf < 1.0)) throw std::domain_error("threshold_from_pf: pf in (0,1)");
  return 2.0 * noise_sigma2 *
         specfun::inv_reg_upper_gamma(static_cast<double>(n_samples), pf);
}

inline DetectorSpec make_detector(int n_samples, double noise_sigma2, double target_pf) {
  DetectorSpec d;
  d.n_samples = n_samples;
  d.noise_sigma2 = noise_sigma2;
  d.target_pf = target_pf;
  d.tau = threshold_from_pf(n_samples, noise_sigma2, target_pf);
  return d;
}

/// General-m detection probability. Evaluates
///   pd = 1 - (m/(m+rho))^m (x^(N+1)/(N! e^x)) Phi2(m,1;N+1; alpha x, x)
/// through the equivalent single series
///   1 - (m/(m+rho))^m sum_i (m)_i alpha^i / i! * P(N+1+i, x),
/// whose terms are positive and bounded, so large x costs no cancellation.
inline LocalOperatingPoint pd_general_m(const channels::FadingLink& sensing,
                                        const DetectorSpec& det) {
  sensing.validate();
  det.validate();
  const double m = sensing.m;
  const double rho = sensing.m * sensing.sigma2 / det.noise_sigma2;
  const double alpha = rho / (m + rho);
  const double x = det.tau / (2.0 * det.noise_sigma2);
  const double pf = pf_from_threshold(det.n_samples, det.noise_sigma2, det.tau);
  const int n = det.n_samples;

  if (det.tau == 0.0) return detail::make_point(pf, 1.0, PdModel::phi2_general);

  double big_m = std::pow(m / (m + rho), m);
  double c = 1.0;  // (m)_i alpha^i / i!, sums to 1/big_m
  double csum = 0.0;
  double p = specfun::reg_lower_gamma(n + 1.0, x);
  // Poisson pmf at shape N+1: P(a+1,x) = P(a,x) - x^a e^-x / Gamma(a+1)
  double pois = std::exp((n + 1.0) * std::log(x) - x - specfun::ln_gamma(n + 2.0));
  double sum = 0.0;
  int i = 0;
  bool converged = false;
  for (; i < specfun::detail::kSeriesCap; ++i) {
    sum += c * p;
    csum += c;
    c *= (m + i) * alpha / (i + 1.0);
    p -= pois;
    if (p < 0.0) p = 0.0;
    pois *= x / (n + 2.0 + i);
    // remaining mass: big_m * sum_{j>i} c_j p_j <= p * (1 - big_m * csum)
    double tail = p * std::max(0.0, 1.0 - big_m * csum);
    if (tail < 1e-15 && i > 3) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("pd_general_m: series cap reached (best estimate " +
                             std::to_string(1.0 - big_m * sum) + ")");
  return detail::make_point(pf, 1.0 - big_m * sum, PdModel::phi2_general);
}

/// m = 1 closed form:
///   pd = 1 - P(N,x) + e^{-tau/2A} alpha^{-N} P(N, alpha x),  A = sigma_z^2 + sigma_w^2.
inline LocalOperatingPoint pd_m_one(const channels::FadingLink& sensing,
                                    const DetectorSpec& det) {
  sensing.validate();
  det.validate();
  if (sensing.m != 1.0) throw std::domain_error("pd_m_one requires m = 1");
  const int n = det.n_samples;
  const double x = det.tau / (2.0 * det.noise_sigma2);
  const double rho = sensing.sigma2 / det.noise_sigma2;
  const double alpha = rho / (1.0 + rho);
  const double aw = sensing.sigma2 + det.noise_sigma2;
  const double pf = pf_from_threshold(n, det.noise_sigma2, det.tau);
  // alpha^-N can be large; fold it into the exponent
  double t3 = std::exp(-det.tau / (2.0 * aw) - n * std::log(alpha)) *
              specfun::reg_lower_gamma(n, alpha * x);
  double pd = 1.0 - specfun::reg_lower_gamma(n, x) + t3;
  return detail::make_point(pf, pd, PdModel::m_one);
}

/// m = 2 closed form (three terms):
///   pd = 1 - P(N-1,x) + e^{-tau/2A} alpha^{-(N-1)} P(N-1, alpha x) (1 + tau/2A)
///        - (N-1)(1-alpha) e^{-tau/2A} alpha^{-N} P(N, alpha x).
inline LocalOperatingPoint pd_m_two(const channels::FadingLink& sensing,
                                    const DetectorSpec& det) {
  sensing.validate();
  det.validate();
  if (sensing.m != 2.0) throw std::domain_error("pd_m_two requires m = 2");
  if (det.n_samples < 2) throw std::domain_error("pd_m_two requires N >= 2");
  const int n = det.n_samples;
  const double x = det.tau / (2.0 * det.noise_sigma2);
  const double rho = 2.0 * sensing.sigma2 / det.noise_sigma2;
  const double alpha = rho / (2.0 + rho);
  const double aw = sensing.sigma2 + det.noise_sigma2;
  const double pf = pf_from_threshold(n, det.noise_sigma2, det.tau);
  double t2 = std::exp(-det.tau / (2.0 * aw) - (n - 1.0) * std::log(alpha)) *
              specfun::reg_lower_gamma(n - 1.0, alpha * x) *
              (1.0 + det.tau / (2.0 * aw));
  double t3 = (n - 1.0) * (1.0 - alpha) *
              std::exp(-det.tau / (2.0 * aw) - n * std::log(alpha)) *
              specfun::reg_lower_gamma(static_cast<double>(n), alpha * x);
  double pd = 1.0 - specfun::reg_lower_gamma(n - 1.0, x) + t2 - t3;
  return detail::make_point(pf, pd, PdModel::m_two);
}

/// Density of the test statistic under H1 (the 1F1 form), used by the m = 1/2
/// quadrature route and as a reference kernel in tests.
inline double h1_statistic_density(double t, double m, double rho, int n_samples,
                                   double noise_sigma2) {
  if (t <= 0.0) return 0.0;
  const double u = t / (2.0 * noise_sigma2);
  const double alpha = rho / (m + rho);
  double logp = n_samples * std::log(u) - u - specfun::ln_gamma(n_samples + 1.0) -
                std::log(2.0 * noise_sigma2) + m * std::log(m / (m + rho));
  return std::exp(logp) * specfun::kummer_1f1(m, n_samples + 1.0, alpha * u).value;
}

/// m = 1/2 detection probability. Default route: numerical integration of the
/// 1F1(1/2; N+1; .) density. The literal closed form printed for this case,
/// 1 - (2A)^N P(N, tau/2A), is not a probability (the (2A)^N prefactor is not
/// dimensionless) and is kept only behind `literal = true` for comparison.
inline LocalOperatingPoint pd_m_half(const channels::FadingLink& sensing,
                                     const DetectorSpec& det, bool literal = false) {
  sensing.validate();
  det.validate();
  if (sensing.m != 0.5) throw std::domain_error("pd_m_half requires m = 1/2");
  const double rho = 0.5 * sensing.sigma2 / det.noise_sigma2;
  const double aw = sensing.sigma2 + det.noise_sigma2;
  const double pf = pf_from_threshold(det.n_samples, det.noise_sigma2, det.tau);
  if (literal) {
    double pd = 1.0 - std::pow(2.0 * aw, det.n_samples) *
                          specfun::reg_lower_gamma(det.n_samples, det.tau / (2.0 * aw));
    LocalOperatingPoint p;  // unclamped: callers compare the raw printed-form value
    p.pf = pf;
    p.pd = pd;
    p.pm = 1.0 - pd;
    p.model = PdModel::m_half;
    return p;
  }
  if (det.tau == 0.0) return detail::make_point(pf, 1.0, PdModel::m_half);
  auto dens = [&](double t) {
    return h1_statistic_density(t, 0.5, rho, det.n_samples, det.noise_sigma2);
  };
  auto cdf = quadrature::integrate(dens, 0.0, det.tau, 1e-9);
  return detail::make_point(pf, 1.0 - cdf.value, PdModel::m_half);
}

/// Approximate complex-representation detection probability, regime-dispatched
/// on m. Hoyt branch uses the equal-weight two-chi-square mixture; Rician
/// branch is the generalized Marcum Q.
inline LocalOperatingPoint pd_complex_regime(const channels::FadingLink& sensing,
                                             const DetectorSpec& det) {
  sensing.validate();
  det.validate();
  const int n = det.n_samples;
  const double pf = pf_from_threshold(n, det.noise_sigma2, det.tau);
  auto par = channels::complex_regime(sensing, n);
  double pd = 0.0;
  switch (par.regime) {
    case channels::Regime::hoyt: {
      // t = A + B with A ~ Gamma(N/2, v1), B ~ Gamma(N/2, v2): the in-phase
      // and quadrature energies of the Hoyt approximation. The printed form
      // subtracts both component cdfs (not normalizable); the exact law of
      // the approximation model is this convolution.
      const double omega = sensing.omega();
      double v1 = omega * (1.0 + par.b) + 2.0 * det.noise_sigma2;
      double v2 = omega * (1.0 - par.b) + 2.0 * det.noise_sigma2;
      if (det.tau == 0.0) { pd = 1.0; break; }
      const double half_n = n / 2.0;
      const double tau = det.tau;
      auto smooth = [&](double a) {  // Gamma(half_n, v1) pdf without a^(h-1)
        return std::exp(-a / v1 - specfun::ln_gamma(half_n) - half_n * std::log(v1)) *
               specfun::reg_lower_gamma(half_n, (tau - a) / v2);
      };
      double cdf;
      if (half_n >= 1.0) {
        auto kern = [&](double a) {
          if (a <= 0.0 || a >= tau) return 0.0;
          return std::pow(a, half_n - 1.0) * smooth(a);
        };
        cdf = quadrature::integrate(kern, 0.0, tau, 1e-11).value;
      } else {
        // a = tau u^(1/h) absorbs the endpoint singularity a^(h-1)
        auto kern = [&](double u) {
          if (u <= 0.0 || u >= 1.0) return 0.0;
          return smooth(tau * std::pow(u, 1.0 / half_n));
        };
        cdf = std::pow(tau, half_n) / half_n *
              quadrature::integrate(kern, 0.0, 1.0, 1e-11).value;
      }
      pd = 1.0 - cdf;
      break;
    }
    case channels::Regime::rayleigh: {
      double a = sensing.sigma2 + det.noise_sigma2;
      pd = 1.0 - specfun::reg_lower_gamma(static_cast<double>(n), det.tau / (2.0 * a));
      break;
    }
    case channels::Regime::rician: {
      if (det.tau == 0.0) { pd = 1.0; break; }
      double b = std::sqrt(2.0 * det.tau / (par.omega_s + 2.0 * det.noise_sigma2));
      pd = specfun::marcum_q(n, std::sqrt(par.mu_z), b);
      break;
    }
  }
  return detail::make_point(pf, pd, PdModel::complex_regime);
}

/// Dispatch by model name; `phi2_general` covers every m >= 1/2.
inline LocalOperatingPoint pd_point(const channels::FadingLink& sensing,
                                    const DetectorSpec& det, PdModel model) {
  switch (model) {
    case PdModel::phi2_general: return pd_general_m(sensing, det);
    case PdModel::m_half: return pd_m_half(sensing, det);
    case PdModel::m_one: return pd_m_one(sensing, det);
    case PdModel::m_two: return pd_m_two(sensing, det);
    case PdModel::complex_regime: return pd_complex_regime(sensing, det);
    case PdModel::monte_carlo:
      throw std::invalid_argument("pd_point: monte_carlo is produced by simkit");
  }
  throw std::invalid_argument("pd_point: bad model");
}

/// Selects the closed form matching the link's m when one exists, otherwise
/// the general series.
inline PdModel closed_form_for(double m) {
  if (m == 0.5) return PdModel::m_half;
  if (m == 1.0) return PdModel::m_one;
  if (m == 2.0) return PdModel::m_two;
  return PdModel::phi2_general;
}

enum class Provenance { analytic, monte_carlo };

struct RocPoint {
  double pf = 0.0;
  double tau = 0.0;
  double pd = 0.0;
  double ci_halfwidth = 0.0;  // 0 for analytic points
};

struct RocCurve {
  Provenance provenance = Provenance::analytic;
  PdModel model = PdModel::phi2_general;
  std::vector<RocPoint> points;
};

/// ROC: one threshold per grid pf, pd from the selected model.
inline RocCurve local_roc(const channels::FadingLink& sensing, int n_samples,
                          double noise_sigma2, PdModel model,
                          const std::vector<double>& pf_grid) {
  double prev = 0.0;
  for (double pf : pf_grid) {
    if (!(pf > 0.0 && pf < 1.0) || pf <= prev)
      throw std::domain_error("local_roc: pf_grid must be strictly increasing in (0,1)");
    prev = pf;
  }
  RocCurve curve;
  curve.model = model;
  for (double pf : pf_grid) {
    DetectorSpec det = make_detector(n_samples, noise_sigma2, pf);
    auto pt = pd_point(sensing, det, model);
    curve.points.push_back({pf, det.tau, pt.pd, 0.0});
  }
  return curve;
}

/// Complementary ROC: pm = 1 - pd pointwise.
inline RocCurve local_croc(const channels::FadingLink& sensing, int n_samples,
                           double noise_sigma2, PdModel model,
                           const std::vector<double>& pf_grid) {
  RocCurve curve = local_roc(sensing, n_samples, noise_sigma2, model, pf_grid);
  for (auto& p : curve.points) p.pd = 1.0 - p.pd;
  return curve;
}

}  // namespace local_detect
}  // namespace ccss

#endif  // CCSS_LOCAL_DETECT_HPP_
