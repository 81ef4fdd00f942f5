// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// The CCSS factor graph: per-branch PU -> SU -> FC chains joined on the
// hypothesis edge. The continuous branch messages reduce analytically to
// (pf, pd)-weighted combinations of P(y|u), so the production path carries
// scalar pairs; a uniformly-quantized discrete variant exists to exercise
// the message-count cost model.
#ifndef CCSS_CCSS_GRAPH_HPP_
#define CCSS_CCSS_GRAPH_HPP_

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccss/channels.hpp"
#include "ccss/fusion.hpp"
#include "ccss/nfg.hpp"
#include "ccss/specfun.hpp"

namespace ccss {
namespace nfg {

/// The eleven named messages of one branch's natural schedule. Continuous
/// messages reduce to scalars and (u = -1, u = +1) pairs; the t-message is a
/// coefficient pair against the indicator basis {t < tau, t > tau}.
struct BranchSchedule {
  double m_y_to_pyu = 1.0;                      // (i) half-edge init
  double m_pv_to_v = 1.0;                       // (ii) leaf marginal, integrates to 1
  double m_v_to_pyuv = 1.0;                     // (iii) pass-through
  double m_pyuv_to_u[2] = {0.0, 0.0};           // (iv) P(y|u), u = -1 / +1
  double m_u_to_put[2] = {0.0, 0.0};            // (v) same pair forwarded
  double m_put_to_t[2] = {0.0, 0.0};            // (vi) coefficients on {t<tau, t>tau}
  double m_t_to_pthz[2] = {0.0, 0.0};           // (vii) pass-through
  double m_pz_to_z = 1.0;                       // (viii) leaf marginal
  double m_z_to_pthz = 1.0;                     // (ix) pass-through
  double m_h_to_pthz = 1.0;                     // (x) unit from the hypothesis edge
  double m_pthz_to_h[2] = {0.0, 0.0};           // (xi) g(H0), g(H1)
};

/// Runs the analytic (i)..(xi) schedule for branch k. The final message is
///   g(H_i) = P(y|-1) * Pr[t < tau | H_i] + P(y|+1) * Pr[t > tau | H_i],
/// with the t-integrals equal to (1-pf, pf) under H0 and (1-pd, pd) under H1.
inline BranchSchedule analytic_branch_schedule(double y, double pd, double pf,
                                               const channels::FadingLink& reporting) {
  BranchSchedule s;
  double pm1 = fusion::report_density(y, -1, reporting);
  double pp1 = fusion::report_density(y, +1, reporting);
  s.m_pyuv_to_u[0] = pm1;
  s.m_pyuv_to_u[1] = pp1;
  s.m_u_to_put[0] = pm1;
  s.m_u_to_put[1] = pp1;
  s.m_put_to_t[0] = pm1;  // coefficient of I(t < tau)
  s.m_put_to_t[1] = pp1;  // coefficient of I(t > tau)
  s.m_t_to_pthz[0] = pm1;
  s.m_t_to_pthz[1] = pp1;
  s.m_pthz_to_h[0] = pm1 * (1.0 - pf) + pp1 * pf;
  s.m_pthz_to_h[1] = pm1 * (1.0 - pd) + pp1 * pd;
  return s;
}

/// Marginal of the hypothesis variable contributed by branch k:
/// (g(H0), g(H1)) given the branch's received scalar and local operating point.
inline std::pair<double, double> ccss_branch_marginal(double y, double pd, double pf,
                                                      const channels::FadingLink& reporting) {
  auto s = analytic_branch_schedule(y, pd, pf, reporting);
  return {s.m_pthz_to_h[0], s.m_pthz_to_h[1]};
}

/// Accumulated likelihoods over all branches: the product of per-branch
/// marginals, log-domain.
inline std::pair<double, double> ccss_accumulated_log_likelihoods(
    std::span<const double> y, std::span<const fusion::SuStats> su) {
  if (y.size() != su.size())
    throw std::invalid_argument("ccss_accumulated_log_likelihoods: size mismatch");
  double l0 = 0.0, l1 = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    auto [g0, g1] = ccss_branch_marginal(y[k], su[k].pd, su[k].pf, su[k].reporting);
    l0 += std::log(g0);
    l1 += std::log(g1);
  }
  return {l0, l1};
}

/// Degree census of the full CCSS graph with K branches: per branch the
/// nodes P(z), P(v) (degree 1), P(u|t) (degree 2), P(t|H,z), P(y|u,v)
/// (degree 3); for K >= 2 the hypothesis edges join at an equality node of
/// degree K+1 (K branch edges plus the readout half-edge).
struct CcssCensus {
  int num_vars = 0;                 // M
  std::map<int, int> degree_census; // d_i
};

inline CcssCensus ccss_full_census(int k_branches) {
  if (k_branches < 1) throw std::domain_error("ccss_full_census: K >= 1");
  CcssCensus c;
  c.degree_census[1] = 2 * k_branches;
  c.degree_census[2] = k_branches;
  c.degree_census[3] += 2 * k_branches;
  if (k_branches >= 2) {
    c.degree_census[k_branches + 1] += 1;
    c.num_vars = 5 * k_branches + 1;
  } else {
    c.num_vars = 6;  // z, t, u, v, y, H
  }
  return c;
}

/// Census of one conditioned branch as used for likelihood computation
/// (y observed, hypothesis fixed): M = 4 variables z, t, u, v; nodes
/// P(z), P(v) of degree 1 and P(t|z), P(u|t), f(u,v) of degree 2.
inline CcssCensus ccss_branch_census() {
  CcssCensus c;
  c.num_vars = 4;
  c.degree_census[1] = 2;
  c.degree_census[2] = 3;
  return c;
}

/// Cost table entry for the likelihood computation with K branches: the
/// explicit method also factorizes over branches, so both costs scale by K.
struct CcssComplexity {
  int k_branches = 1;
  int domain_card = 2;
  int num_vars = 0;
  unsigned long long c_fg = 0;
  unsigned long long c_cn = 0;
};

/// K = 1 reports the full-graph numbers (M = 6); K >= 2 reports the
/// per-branch likelihood graphs replicated K times (M = 4 each).
inline CcssComplexity ccss_complexity(int k_branches, int domain_card) {
  if (domain_card < 2) throw std::domain_error("ccss_complexity: |X| >= 2");
  CcssComplexity out;
  out.k_branches = k_branches;
  out.domain_card = domain_card;
  if (k_branches == 1) {
    auto c = ccss_full_census(1);
    out.num_vars = c.num_vars;
    out.c_fg = complexity_fg(c.degree_census, domain_card);
    out.c_cn = complexity_explicit(c.num_vars, domain_card);
  } else {
    auto c = ccss_branch_census();
    out.num_vars = c.num_vars * k_branches;
    out.c_fg = complexity_fg(c.degree_census, domain_card) * k_branches;
    out.c_cn = complexity_explicit(c.num_vars, domain_card) * k_branches;
  }
  return out;
}

/// Uniformly quantized branch graph (y observed, hypothesis fixed). Only
/// used to demonstrate the cost accounting: envelope variables take their
/// bin-midpoint quantile values, the test statistic is binned with one edge
/// pinned at tau so the hard decision stays exact.
///
/// Kernel of t given the sensing envelope follows the same law the
/// closed forms integrate: t = |h e^{j theta} + w_0|^2 + sum_{n=1..N} |w_n|^2.
inline Graph build_discretized_branch(double y_observed, bool under_h1,
                                      const channels::FadingLink& sensing,
                                      const channels::FadingLink& reporting,
                                      int n_samples, double tau, int levels) {
  if (levels < 2) throw std::domain_error("build_discretized_branch: |X| >= 2");
  sensing.validate();
  reporting.validate();

  // envelope quantile midpoints: h = sqrt(gamma quantile)
  auto envelope_points = [&](const channels::FadingLink& link) {
    std::vector<double> pts(levels);
    for (int i = 0; i < levels; ++i) {
      double q = (i + 0.5) / levels;
      // invert P(m, m h^2 / omega) = q by bisection
      double lo = 0.0, hi = link.omega() * 400.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (specfun::reg_lower_gamma(link.m, link.m * mid / link.omega()) < q ? lo : hi) = mid;
      }
      pts[i] = std::sqrt(0.5 * (lo + hi));
    }
    return pts;
  };
  std::vector<double> z_pts = envelope_points(sensing);
  std::vector<double> v_pts = envelope_points(reporting);

  // t bins: levels-1 cells on [0, tau), one cell [tau, inf)
  std::vector<double> t_edges(levels + 1);
  for (int i = 0; i < levels; ++i) t_edges[i] = tau * i / (levels - 1.0);
  t_edges[levels] = std::numeric_limits<double>::infinity();

  const double sw2 = sensing.noise_sigma2;
  auto p_t_above = [&](double h, double edge) {
    if (edge <= 0.0) return 1.0;
    if (std::isinf(edge)) return 0.0;
    if (!under_h1 || h == 0.0)
      return specfun::reg_upper_gamma(static_cast<double>(n_samples),
                                      edge / (2.0 * sw2));
    return specfun::marcum_q(n_samples + 1, h / std::sqrt(sw2),
                             std::sqrt(edge / sw2));
  };

  Graph g;
  int e_z = g.add_edge("z", levels);
  int e_t = g.add_edge("t", levels);
  int e_u = g.add_edge("u", 2);
  int e_v = g.add_edge("v", levels);

  Table pz(levels, 1.0 / levels);
  g.add_factor("P(z)", {e_z}, pz);

  Table ptz(static_cast<std::size_t>(levels) * levels, 0.0);  // (t, z)
  for (int zi = 0; zi < levels; ++zi) {
    double h = under_h1 ? z_pts[zi] : 0.0;
    for (int ti = 0; ti < levels; ++ti) {
      double p = p_t_above(h, t_edges[ti]) - p_t_above(h, t_edges[ti + 1]);
      ptz[static_cast<std::size_t>(ti) * levels + zi] = std::max(p, 0.0);
    }
  }
  g.add_factor("P(t|z)", {e_t, e_z}, ptz);

  // u index 0 -> -1, 1 -> +1; decision is t in the top bin
  Table put(static_cast<std::size_t>(2) * levels, 0.0);  // (u, t)
  for (int ti = 0; ti < levels; ++ti) {
    int u_idx = (ti == levels - 1) ? 1 : 0;
    put[static_cast<std::size_t>(u_idx) * levels + ti] = 1.0;
  }
  g.add_factor("P(u|t)", {e_u, e_t}, put);

  Table pv(levels, 1.0 / levels);
  g.add_factor("P(v)", {e_v}, pv);

  const double sn2 = reporting.noise_sigma2;
  Table fyuv(static_cast<std::size_t>(2) * levels, 0.0);  // (u, v)
  for (int ui = 0; ui < 2; ++ui) {
    double u = ui == 0 ? -1.0 : 1.0;
    for (int vi = 0; vi < levels; ++vi) {
      double d = y_observed - u * v_pts[vi];
      fyuv[static_cast<std::size_t>(ui) * levels + vi] =
          std::exp(-d * d / (2.0 * sn2)) / std::sqrt(2.0 * M_PI * sn2);
    }
  }
  g.add_factor("P(y|u,v)", {e_u, e_v}, fyuv);

  return g;
}

}  // namespace nfg
}  // namespace ccss

#endif  // CCSS_CCSS_GRAPH_HPP_
