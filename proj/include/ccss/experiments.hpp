// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Experiment recipes producing result tables: local ROC/CROC, system ROC,
// detection-vs-SNR sweeps, the cooperating-count sweep and the cost table.
#ifndef CCSS_EXPERIMENTS_HPP_
#define CCSS_EXPERIMENTS_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "ccss/ccss_graph.hpp"
#include "ccss/scenario.hpp"
#include "ccss/simkit.hpp"
#include "ccss/sysperf.hpp"
#include "ccss/table.hpp"

namespace ccss {
namespace experiments {

namespace detail {

inline local_detect::PdModel analytic_model(simkit::PdRoute route, double m) {
  switch (route) {
    case simkit::PdRoute::phi2: return local_detect::PdModel::phi2_general;
    case simkit::PdRoute::closed: return local_detect::closed_form_for(m);
    case simkit::PdRoute::complex: return local_detect::PdModel::complex_regime;
  }
  return local_detect::PdModel::phi2_general;
}

// single-SU scenario around links[0], for the local Monte Carlo column
inline simkit::NetworkScenario single_su(const scenario::ScenarioFile& sf) {
  simkit::NetworkScenario one = sf.network;
  one.links = {sf.network.links.front()};
  one.rule.kind = fusion::FusionKind::counting;
  one.rule.count_threshold = 1;
  return one;
}

// per-SU success probabilities for the counting analytics
inline std::pair<std::vector<double>, std::vector<double>> success_pairs(
    const simkit::NetworkScenario& net, const simkit::ScenarioRuntime& rt) {
  std::vector<double> p1s, p0s;
  for (std::size_t k = 0; k < net.links.size(); ++k) {
    const auto& rep = net.links[k].reporting;
    if (rep.m == 1.0) {
      auto sp = sysperf::success_probs_m1(rt.su_stats[k].pd, rt.su_stats[k].pf, rep);
      p1s.push_back(sp.p1);
      p0s.push_back(sp.p0);
    } else if (rep.m == 2.0) {
      auto sp = sysperf::success_probs_m2(rt.su_stats[k].pd, rt.su_stats[k].pf, rep);
      p1s.push_back(sp.p1);
      p0s.push_back(sp.p0);
    } else {
      // generic quadrature of the reporting density
      double q = quadrature::integrate_to_inf(
                     [&](double y) { return fusion::report_density(y, +1, rep); }, 0.0,
                     1e-11)
                     .value;
      p1s.push_back((1.0 - rt.su_stats[k].pd) * (1.0 - q) + rt.su_stats[k].pd * q);
      p0s.push_back((1.0 - rt.su_stats[k].pf) * (1.0 - q) + rt.su_stats[k].pf * q);
    }
  }
  return {p1s, p0s};
}

}  // namespace detail

/// Local ROC table: pf, tau, pd_analytic, pd_complex_model, pd_mc, mc_ci.
/// Thresholds are re-derived from each grid pf; the Monte Carlo column uses
/// the scenario's sensing simulation model on the first SU's link.
inline table::Table local_roc(const scenario::ScenarioFile& sf, int workers,
                              bool complementary = false) {
  const auto& link = sf.network.links.front().sensing;
  auto grid = sf.pf_grid.materialize();
  table::Table t;
  t.name = complementary ? "local_croc" : "local_roc";
  const char* p = complementary ? "pm" : "pd";
  t.columns = {"pf", "tau", std::string(p) + "_analytic",
               std::string(p) + "_complex_model", std::string(p) + "_mc", "mc_ci"};
  auto one = detail::single_su(sf);
  for (double pf : grid) {
    auto det = local_detect::make_detector(sf.network.n_samples, link.noise_sigma2, pf);
    double pd_a = local_detect::pd_point(
                      link, det, detail::analytic_model(sf.network.pd_route, link.m))
                      .pd;
    double pd_c = local_detect::pd_complex_regime(link, det).pd;
    one.target_local_pf = pf;
    auto rt = simkit::prepare(one);
    auto mc = simkit::estimate_local_rates(one, rt, true, sf.trials, workers)[0];
    auto out = [&](double v) { return complementary ? 1.0 - v : v; };
    t.add_row({pf, det.tau, out(pd_a), out(pd_c), out(mc.value), mc.ci95});
  }
  return t;
}

/// System ROC: one row per count threshold K1 = K..1. Analytic columns are
/// the counting closed forms (heterogeneous per-SU success probabilities);
/// Monte Carlo columns run the scenario's fusion rule with the FC threshold
/// calibrated to the row's analytic false-alarm target on a separate trial
/// range. Rows whose calibration tail would hold fewer than 50 trials are
/// skipped.
inline table::Table system_roc(const scenario::ScenarioFile& sf, int workers) {
  auto net = sf.network;
  auto rt = simkit::prepare(net);
  auto [p1s, p0s] = detail::success_pairs(net, rt);
  const int k_total = net.k_total();

  table::Table t;
  t.name = "system_roc";
  t.columns = {"k1",    "pf_analytic", "pd_analytic", "lambda",
               "pf_mc", "pf_mc_ci",    "pd_mc",       "pd_mc_ci"};
  for (int k1 = k_total; k1 >= 1; --k1) {
    double pf_a = sysperf::heterogeneous_counting_tail(p0s, k1);
    double pd_a = sysperf::heterogeneous_counting_tail(p1s, k1);
    double lambda;
    if (net.rule.kind == fusion::FusionKind::counting) {
      net.rule.count_threshold = k1;
      lambda = k1 - 0.5;
    } else {
      if (pf_a * static_cast<double>(sf.trials) < 50.0 || pf_a > 0.999) continue;
      auto est = simkit::calibrate_lambda(net, rt, pf_a, sf.trials, workers, 0);
      net.rule.lambda = est.lambda;
      lambda = est.lambda;
    }
    auto pf_mc = simkit::estimate_decision_rate(net, rt, false, sf.trials, workers,
                                                static_cast<uint64_t>(sf.trials));
    auto pd_mc = simkit::estimate_decision_rate(net, rt, true, sf.trials, workers,
                                                static_cast<uint64_t>(sf.trials));
    t.add_row({static_cast<double>(k1), pf_a, pd_a, lambda, pf_mc.value, pf_mc.ci95,
               pd_mc.value, pd_mc.ci95});
  }
  return t;
}

/// Cooperating-count sweep: l, p_m, p_f, p_tot, is_optimal. Closed-form path;
/// requires identical detectors and identical reporting links.
inline table::Table l_sweep(const scenario::ScenarioFile& sf) {
  const auto& net = sf.network;
  for (const auto& l : net.links) {
    if (l.sensing.m != net.links[0].sensing.m ||
        l.sensing.sigma2 != net.links[0].sensing.sigma2 ||
        l.reporting.sigma2 != net.links[0].reporting.sigma2 ||
        l.reporting.m != net.links[0].reporting.m)
      throw std::domain_error("l_sweep: closed-form path requires identical SUs");
  }
  auto rt = simkit::prepare(net);
  auto [p1s, p0s] = detail::success_pairs(net, rt);
  double p1 = p1s[0], p0 = p0s[0];
  int k_total = net.k_total();
  int l_hi = sf.l_hi > 0 ? sf.l_hi : k_total;
  int l_opt = sysperf::optimal_l(k_total, p1, p0);

  table::Table t;
  t.name = "l_sweep";
  t.columns = {"l", "p_m", "p_f", "p_tot", "is_optimal"};
  for (int l = sf.l_lo; l <= l_hi; ++l) {
    auto s = sysperf::system_point(k_total, l, p1, p0);
    t.add_row({static_cast<double>(l), s.p_m, s.p_f, s.p_tot,
               l == l_opt ? 1.0 : 0.0});
  }
  return t;
}

/// Message-count cost table for the CCSS graphs.
inline table::Table complexity(int k_branches, const std::vector<int>& x_levels) {
  table::Table t;
  t.name = "complexity";
  t.columns = {"num_rvs", "c_fg_cycles", "c_cn_cycles", "domain_card", "k_branches"};
  for (int x : x_levels) {
    auto c = nfg::ccss_complexity(k_branches, x);
    t.add_row({static_cast<double>(c.num_vars), static_cast<double>(c.c_fg),
               static_cast<double>(c.c_cn), static_cast<double>(x),
               static_cast<double>(k_branches)});
  }
  return t;
}

/// Detection probability versus the mean sensing SNR: shifts the scenario's
/// per-SU sensing profile so its mean lands on each grid point, calibrates
/// the FC threshold to the system false-alarm target, and measures the
/// cooperative detection rate on a fresh trial range. The non-cooperative
/// column is a single SU at the mean SNR with the whole false-alarm budget.
inline table::Table pd_vs_snr(const scenario::ScenarioFile& sf, int workers) {
  auto grid = sf.snr_grid_db.materialize();
  const auto& base = sf.network;
  double base_mean = 0.0;
  for (const auto& l : base.links)
    base_mean += channels::snr_linear_to_db(l.sensing.avg_snr());
  base_mean /= base.k_total();

  table::Table t;
  t.name = "pd_vs_snr";
  t.columns = {"mean_snr_db", "pd_local_mean", "pd_noncoop", "pd_coop_mc", "mc_ci"};
  for (double mean : grid) {
    simkit::NetworkScenario net = base;
    for (auto& l : net.links) {
      double db = channels::snr_linear_to_db(l.sensing.avg_snr()) + (mean - base_mean);
      l.sensing = channels::FadingLink::from_snr_db(l.sensing.m, db,
                                                    l.sensing.noise_sigma2);
    }
    auto rt = simkit::prepare(net);
    auto est = simkit::calibrate_lambda(net, rt, net.target_system_pf, sf.trials,
                                        workers, 0);
    net.rule.lambda = est.lambda;
    auto pd_mc = simkit::estimate_decision_rate(net, rt, true, sf.trials, workers,
                                                static_cast<uint64_t>(sf.trials));

    auto mean_link = channels::FadingLink::from_snr_db(
        base.links[0].sensing.m, mean, base.links[0].sensing.noise_sigma2);
    auto det_local = local_detect::make_detector(
        net.n_samples, mean_link.noise_sigma2, net.target_local_pf);
    auto det_noncoop = local_detect::make_detector(
        net.n_samples, mean_link.noise_sigma2, net.target_system_pf);
    auto model = detail::analytic_model(base.pd_route, mean_link.m);
    t.add_row({mean, local_detect::pd_point(mean_link, det_local, model).pd,
               local_detect::pd_point(mean_link, det_noncoop, model).pd, pd_mc.value,
               pd_mc.ci95});
  }
  return t;
}

}  // namespace experiments
}  // namespace ccss

#endif  // CCSS_EXPERIMENTS_HPP_
