// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
#ifndef CCSS_CHANNELS_HPP_
#define CCSS_CHANNELS_HPP_

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ccss/rng.hpp"

namespace ccss {
namespace channels {

/// One hop's fading statistics. The envelope h is Nakagami-m with
/// E[h^2] = 2 m sigma2; noise is complex Gaussian with per-component
/// variance noise_sigma2.
struct FadingLink {
  double m = 1.0;
  double sigma2 = 1.0;
  double noise_sigma2 = 1.0;

  double omega() const { return 2.0 * m * sigma2; }                 // E[h^2]
  double avg_snr() const { return m * sigma2 / noise_sigma2; }      // rho-bar
  double alpha() const { return sigma2 / (sigma2 + noise_sigma2); } // rho/(m+rho)

  void validate() const {
    if (!(m >= 0.5)) throw std::domain_error("FadingLink: m must be >= 1/2");
    if (!(sigma2 > 0.0)) throw std::domain_error("FadingLink: sigma2 must be > 0");
    if (!(noise_sigma2 > 0.0)) throw std::domain_error("FadingLink: noise_sigma2 must be > 0");
  }

  static FadingLink from_snr_db(double m, double snr_db, double noise_sigma2 = 1.0) {
    FadingLink link;
    link.m = m;
    link.noise_sigma2 = noise_sigma2;
    link.sigma2 = std::pow(10.0, snr_db / 10.0) * noise_sigma2 / m;
    link.validate();
    return link;
  }
};

inline double snr_db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double snr_linear_to_db(double rho) { return 10.0 * std::log10(rho); }

enum class Regime { hoyt, rayleigh, rician };

/// Parameters of the approximate complex-envelope representation.
struct ComplexRegimeParams {
  Regime regime = Regime::rayleigh;
  double b = 0.0;        // hoyt asymmetry, sqrt((1-m)/m)
  double omega_s = 0.0;  // rician scattered power, 2 sigma2 (m - sqrt(m^2-m))
  double mu_i = 0.0;     // rician mean, in-phase
  double mu_q = 0.0;     // rician mean, quadrature
  double mu_z = 0.0;     // noncentrality of the 2N-dof statistic
};

/// Regime dispatch on m; phase enters only through mu_i^2 + mu_q^2 and is 0
/// by default.
inline ComplexRegimeParams complex_regime(const FadingLink& link, int n_samples,
                                          double phase = 0.0) {
  link.validate();
  if (n_samples < 1) throw std::domain_error("complex_regime: n_samples >= 1");
  ComplexRegimeParams p;
  const double m = link.m;
  if (m < 1.0) {
    p.regime = Regime::hoyt;
    p.b = std::sqrt((1.0 - m) / m);
  } else if (m == 1.0) {
    p.regime = Regime::rayleigh;
  } else {
    p.regime = Regime::rician;
    const double d = std::sqrt((m - 1.0) / m);
    const double omega_z = link.omega();
    p.omega_s = 2.0 * link.sigma2 * (m - std::sqrt(m * m - m));
    p.mu_i = std::sqrt(omega_z * d) * std::cos(phase);
    p.mu_q = std::sqrt(omega_z * d) * std::sin(phase);
    const double rho = link.avg_snr();
    p.mu_z = 2.0 * n_samples * rho * d / (rho * (1.0 - d) + 1.0);
  }
  return p;
}

/// Nakagami envelope draw: square root of a gamma power with shape m and
/// mean 2 m sigma2.
inline double sample_nakagami_envelope(const FadingLink& link, rng::Stream& rs) {
  return std::sqrt(rs.gamma(link.m, 2.0 * link.sigma2));
}

/// Complex AWGN with independent N(0, sigma2) components.
inline std::complex<double> sample_awgn(double sigma2, rng::Stream& rs) {
  const double s = std::sqrt(sigma2);
  double re = rs.normal(), im = rs.normal();
  return {s * re, s * im};
}

}  // namespace channels
}  // namespace ccss

#endif  // CCSS_CHANNELS_HPP_
