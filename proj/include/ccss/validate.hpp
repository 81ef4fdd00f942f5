// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// The full oracle matrix behind `ccss validate` and the acceptance suite:
// every closed form checked against an independent construction at pinned
// tolerances, one result line per criterion.
#ifndef CCSS_VALIDATE_HPP_
#define CCSS_VALIDATE_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ccss/experiments.hpp"
#include "ccss/oracle.hpp"
#include "ccss/scenario.hpp"
#include "ccss/simkit.hpp"

namespace ccss {
namespace validate {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool informational = false;  // reported but not gating
  std::string detail;
};

struct Options {
  long trials_big = 1000000;   // oracle-grade Monte Carlo comparisons
  long trials_mid = 100000;    // end-to-end fusion measurements
  int workers = 1;
  std::string preset_dir = "presets";
  // in-process CLI runner for the determinism criterion; optional
  std::function<int(const std::vector<std::string>&, std::ostream&)> cli_runner;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline simkit::NetworkScenario single_su_scenario(double m, double snr_db, int n,
                                                  double pf, uint64_t seed,
                                                  simkit::SensingModel model) {
  simkit::NetworkScenario sc;
  sc.links.push_back({channels::FadingLink::from_snr_db(m, snr_db),
                      channels::FadingLink::from_snr_db(1.0, 10.0)});
  sc.n_samples = n;
  sc.target_local_pf = pf;
  sc.rule.kind = fusion::FusionKind::counting;
  sc.rule.count_threshold = 1;
  sc.seed = seed;
  sc.sensing_model = model;
  return sc;
}

}  // namespace detail

/// 1. Threshold inversion round trip at 1e-9.
inline CheckResult check_threshold_inversion() {
  double worst = 0.0;
  for (int n : {10, 20})
    for (double pf : {0.01, 0.03, 0.1}) {
      double tau = local_detect::threshold_from_pf(n, 1.0, pf);
      worst = std::max(worst, std::fabs(local_detect::pf_from_threshold(n, 1.0, tau) - pf));
    }
  return {"1 threshold-inversion", worst <= 1e-9,
          false, "max |pf roundtrip error| = " + detail::fmt(worst)};
}

/// 2. Closed forms vs the Monte Carlo sampler of the analytic statistic law
/// (single envelope of signal energy + N+1 complex noise samples), within
/// 95% CI + 0.005 at m in {1,2}, SNR {0,4,10,20} dB, N=10.
inline CheckResult check_local_pd_oracle(const Options& opt) {
  double worst = 0.0;
  std::ostringstream det;
  auto d10 = local_detect::make_detector(10, 1.0, 0.1);
  for (double m : {1.0, 2.0}) {
    for (double snr : {0.0, 4.0, 10.0, 20.0}) {
      auto link = channels::FadingLink::from_snr_db(m, snr);
      double closed = local_detect::pd_point(link, d10,
                                             local_detect::closed_form_for(m)).pd;
      double mc = oracle::mc_pd_literal(m, link.avg_snr(), 10, 1.0, d10.tau,
                                        opt.trials_big, 97 + static_cast<uint64_t>(snr));
      double ci = 1.96 * std::sqrt(std::max(mc * (1.0 - mc), 1e-12) / opt.trials_big);
      double excess = std::fabs(closed - mc) - ci;
      worst = std::max(worst, excess);
    }
  }
  det << "max |closed - mc| beyond CI = " << detail::fmt(worst) << " (budget 0.005)";
  return {"2 local-pd-oracle", worst <= 0.005, false, det.str()};
}

/// 2b. The module-invariant matrix {1/2,1,2} x {10,20} x {0,4,10,20} dB at
/// 2e-3 absolute against the same sampler.
inline CheckResult check_local_pd_matrix(const Options& opt) {
  double worst = 0.0;
  for (double m : {0.5, 1.0, 2.0})
    for (int n : {10, 20})
      for (double snr : {0.0, 4.0, 10.0, 20.0}) {
        auto det = local_detect::make_detector(n, 1.0, 0.1);
        auto link = channels::FadingLink::from_snr_db(m, snr);
        double closed = local_detect::pd_point(link, det,
                                               local_detect::closed_form_for(m)).pd;
        double mc = oracle::mc_pd_literal(m, link.avg_snr(), n, 1.0, det.tau,
                                          opt.trials_big,
                                          700 + n + static_cast<uint64_t>(snr * 10 + m * 2));
        worst = std::max(worst, std::fabs(closed - mc));
      }
  return {"2b local-pd-matrix", worst <= 2e-3, false,
          "max |closed - mc| = " + detail::fmt(worst) + " over 24 cells (budget 0.002)"};
}

/// 2c. Informational: the physical per-sample and block sensing chains do
/// not track the closed forms (their window signal energy scales with N).
inline CheckResult check_physical_models_info(const Options& opt) {
  std::ostringstream det;
  auto sc_ps = detail::single_su_scenario(1.0, 10.0, 10, 0.1, 31, simkit::SensingModel::per_sample);
  auto sc_bl = detail::single_su_scenario(1.0, 10.0, 10, 0.1, 31, simkit::SensingModel::block);
  auto rt = simkit::prepare(sc_ps);
  long n = std::max(20000L, opt.trials_mid / 5);
  double ps = simkit::estimate_local_rates(sc_ps, rt, true, n, opt.workers)[0].value;
  double bl = simkit::estimate_local_rates(sc_bl, rt, true, n, opt.workers)[0].value;
  double closed = rt.su_stats[0].pd;
  det << "closed pd = " << detail::fmt(closed) << ", per-sample chain = "
      << detail::fmt(ps) << ", block chain = " << detail::fmt(bl)
      << " (m=1, 10 dB, N=10, pf=0.1)";
  return {"2c physical-model-gaps (informational)", true, true, det.str()};
}

/// 3. General-series route equals the m=1 and m=2 closed forms to 1e-7 on a
/// 20-point threshold grid.
inline CheckResult check_route_equivalence() {
  double worst = 0.0;
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i)
    grid.push_back(std::pow(10.0, -2.0 + i * (std::log10(0.99) + 2.0) / 19.0));
  for (double m : {1.0, 2.0}) {
    auto link = channels::FadingLink::from_snr_db(m, 10.0);
    for (double pf : grid) {
      auto det = local_detect::make_detector(10, 1.0, pf);
      double a = local_detect::pd_general_m(link, det).pd;
      double b = local_detect::pd_point(link, det, local_detect::closed_form_for(m)).pd;
      worst = std::max(worst, std::fabs(a - b));
    }
  }
  return {"3 route-equivalence", worst <= 1e-7, false,
          "max |phi2 - closed| = " + detail::fmt(worst)};
}

/// 4. Model comparison: at m=2 and 20 dB the complex-representation model
/// stays within 0.02 of the closed form across the pf grid; at 0 dB the gap
/// exceeds 0.05 somewhere.
inline CheckResult check_model_comparison() {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i)
    grid.push_back(std::pow(10.0, -2.0 + i * (std::log10(0.99) + 2.0) / 19.0));
  double worst_high = 0.0, worst_low = 0.0;
  for (double pf : grid) {
    auto det = local_detect::make_detector(10, 1.0, pf);
    auto high = channels::FadingLink::from_snr_db(2.0, 20.0);
    auto low = channels::FadingLink::from_snr_db(2.0, 0.0);
    worst_high = std::max(worst_high,
                          std::fabs(local_detect::pd_m_two(high, det).pd -
                                    local_detect::pd_complex_regime(high, det).pd));
    worst_low = std::max(worst_low,
                         std::fabs(local_detect::pd_m_two(low, det).pd -
                                   local_detect::pd_complex_regime(low, det).pd));
  }
  bool pass = worst_high <= 0.02 && worst_low > 0.05;
  return {"4 model-comparison", pass, false,
          "20 dB max gap = " + detail::fmt(worst_high) + " (<= 0.02), 0 dB max gap = " +
              detail::fmt(worst_low) + " (> 0.05)"};
}

/// 5. m = 1/2: the printed closed form is not a probability (recorded), and
/// the quadrature route matches the Monte Carlo sampler within CI + 0.005.
inline CheckResult check_m_half(const Options& opt) {
  auto det = local_detect::make_detector(10, 1.0, 0.1);
  auto link = channels::FadingLink::from_snr_db(0.5, 4.0);
  double lit = local_detect::pd_m_half(link, det, /*literal=*/true).pd;
  bool anomaly = !(lit >= 0.0 && lit <= 1.0);
  double worst = 0.0;
  for (double snr : {0.0, 4.0, 10.0}) {
    auto l = channels::FadingLink::from_snr_db(0.5, snr);
    double quad = local_detect::pd_m_half(l, det).pd;
    double mc = oracle::mc_pd_literal(0.5, l.avg_snr(), 10, 1.0, det.tau,
                                      opt.trials_big, 55 + static_cast<uint64_t>(snr));
    double ci = 1.96 * std::sqrt(std::max(mc * (1.0 - mc), 1e-12) / opt.trials_big);
    worst = std::max(worst, std::fabs(quad - mc) - ci);
  }
  return {"5 m-half-anomaly", anomaly && worst <= 0.005, false,
          "literal form value " + detail::fmt(lit) +
              " (outside [0,1] as printed); quadrature-vs-mc beyond CI = " +
              detail::fmt(worst)};
}

/// 6. Sum-product exactness on 50 random acyclic graphs plus the example
/// topology, against brute-force marginalization at 1e-12 relative.
inline CheckResult check_spa_exactness() {
  double worst = 0.0;
  auto compare = [&](const nfg::Graph& g) {
    auto spa = nfg::run_spa(g);
    auto bf = oracle::brute_force_marginals(g);
    for (std::size_t e = 0; e < spa.beliefs.size(); ++e)
      for (std::size_t v = 0; v < spa.beliefs[e].size(); ++v) {
        double denom = std::max(std::fabs(bf.marginals[e][v]), 1e-30);
        worst = std::max(worst,
                         std::fabs(spa.beliefs[e][v] - bf.marginals[e][v]) / denom);
      }
  };
  for (uint64_t seed = 0; seed < 50; ++seed) compare(oracle::random_acyclic_graph(seed));
  compare(oracle::example_topology(4242));
  return {"6 spa-exactness", worst <= 1e-12, false,
          "max relative belief error = " + detail::fmt(worst) + " over 51 graphs"};
}

/// 7. Cost-model integers.
inline CheckResult check_complexity_numbers() {
  auto a = nfg::ccss_complexity(1, 2);
  auto b = nfg::ccss_complexity(10, 2);
  auto c = nfg::ccss_complexity(10, 4);
  bool pass = a.num_vars == 6 && a.c_fg == 60 && a.c_cn == 384 && b.c_fg == 280 &&
              b.c_cn == 640 && c.c_fg == 1040 && c.c_cn == 10240;
  return {"7 complexity-integers", pass, false,
          "K=1,|X|=2: " + std::to_string(a.c_fg) + "/" + std::to_string(a.c_cn) +
              "; K=10,|X|=2: " + std::to_string(b.c_fg) + "/" + std::to_string(b.c_cn) +
              "; K=10,|X|=4: " + std::to_string(c.c_fg) + "/" + std::to_string(c.c_cn)};
}

/// 8. Binomial system closed forms vs the counting-rule chain at 1e6 trials,
/// K in {5,10,20}, identical detectors.
inline CheckResult check_binomial_vs_counting(const Options& opt) {
  double worst = 0.0;
  std::ostringstream det;
  for (int k_total : {5, 10, 20}) {
    simkit::NetworkScenario sc;
    for (int i = 0; i < k_total; ++i)
      sc.links.push_back({channels::FadingLink::from_snr_db(1.0, 8.0),
                          channels::FadingLink::from_snr_db(1.0, 10.0)});
    sc.n_samples = 20;
    sc.target_local_pf = 0.03;
    sc.rule.kind = fusion::FusionKind::counting;
    sc.rule.count_threshold = std::max(1, k_total / 4);
    sc.seed = 1200 + k_total;
    auto rt = simkit::prepare(sc);
    auto sp = sysperf::success_probs_m1(rt.su_stats[0].pd, rt.su_stats[0].pf,
                                        sc.links[0].reporting);
    auto pd_mc = simkit::estimate_decision_rate(sc, rt, true, opt.trials_big, opt.workers);
    auto pf_mc = simkit::estimate_decision_rate(sc, rt, false, opt.trials_big, opt.workers);
    double pd_cf = sysperf::system_pd(k_total, sc.rule.count_threshold, sp.p1);
    double pf_cf = sysperf::system_pf(k_total, sc.rule.count_threshold, sp.p0);
    worst = std::max(worst, std::fabs(pd_cf - pd_mc.value) - pd_mc.ci95);
    worst = std::max(worst, std::fabs(pf_cf - pf_mc.value) - pf_mc.ci95);
  }
  det << "max |closed - mc| beyond CI = " << detail::fmt(worst) << " (budget 0.005)";
  return {"8 binomial-system-forms", worst <= 0.005, false, det.str()};
}

/// 9. Optimal cooperating count: formula vs brute force on 1000 random
/// instances, and the cooperating-count preset reproduces 14 (K=20) and
/// 11 (K=15) within +-1.
inline CheckResult check_optimal_l(const Options& opt) {
  rng::Stream rs(2718, 1, 0);
  int mismatches = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    int k_total = 1 + static_cast<int>(rs.uniform01() * 50);
    double p0 = 0.02 + 0.9 * rs.uniform01();
    double p1 = p0 + (0.999 - p0) * (0.05 + 0.95 * rs.uniform01());
    if (!(p1 < 1.0 && p1 > p0)) continue;
    int fast = sysperf::optimal_l(k_total, p1, p0);
    double best = sysperf::total_error(k_total, 1, p1, p0);
    for (int l = 2; l <= k_total; ++l)
      best = std::min(best, sysperf::total_error(k_total, l, p1, p0));
    if (std::fabs(sysperf::total_error(k_total, fast, p1, p0) - best) > 1e-15)
      ++mismatches;
  }

  auto lopt_of = [&](const std::string& preset) {
    auto sf = scenario::load(opt.preset_dir + "/" + preset + ".json");
    auto rt = simkit::prepare(sf.network);
    auto sp = sysperf::success_probs_m1(rt.su_stats[0].pd, rt.su_stats[0].pf,
                                        sf.network.links[0].reporting);
    return sysperf::optimal_l(sf.network.k_total(), sp.p1, sp.p0);
  };
  int l20 = lopt_of("fig7_k20");
  int l15 = lopt_of("fig7_k15");
  bool pass = mismatches == 0 && std::abs(l20 - 14) <= 1 && std::abs(l15 - 11) <= 1;
  return {"9 optimal-l", pass, false,
          "brute-force mismatches " + std::to_string(mismatches) + "/1000; preset l_opt " +
              std::to_string(l20) + " (target 14+-1), " + std::to_string(l15) +
              " (target 11+-1)"};
}

/// 10. LRT point-dominates EGC and MRC at five matched false-alarm grid
/// points on the ten-SU preset, 1e5 trials per rule and hypothesis.
inline CheckResult check_fusion_ordering(const Options& opt) {
  auto sf = scenario::load(opt.preset_dir + "/fusion_svi.json");
  auto net = sf.network;
  auto rt = simkit::prepare(net);
  const long trials = opt.trials_mid;
  std::vector<double> grid = sf.pf_grid.materialize();

  auto run_rule = [&](fusion::FusionKind kind) {
    auto sc = net;
    sc.rule.kind = kind;
    auto h0 = simkit::collect_statistics(sc, rt, false, trials, opt.workers, 0);
    auto h1 = simkit::collect_statistics(sc, rt, true, trials, opt.workers,
                                         static_cast<uint64_t>(trials));
    std::sort(h0.begin(), h0.end());
    std::vector<double> pds;
    for (double pf : grid) {
      long idx = std::clamp(static_cast<long>(std::ceil((1.0 - pf) * trials)) - 1, 0L,
                            trials - 1);
      double lambda = h0[idx];
      long hits = 0;
      for (double v : h1)
        if (v > lambda) ++hits;
      pds.push_back(static_cast<double>(hits) / trials);
    }
    return pds;
  };

  auto lrt = run_rule(fusion::FusionKind::lrt);
  auto egc = run_rule(fusion::FusionKind::egc);
  auto mrc = run_rule(fusion::FusionKind::mrc);
  bool pass = true;
  std::ostringstream det;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pass = pass && lrt[i] >= egc[i] && lrt[i] >= mrc[i];
    det << (i ? "; " : "") << "PF=" << detail::fmt(grid[i]) << ": lrt "
        << detail::fmt(lrt[i]) << " egc " << detail::fmt(egc[i]) << " mrc "
        << detail::fmt(mrc[i]);
  }
  return {"10 fusion-roc-ordering", pass, false, det.str()};
}

/// 11. Headline operating point: cooperative P_D = 0.95 +- 0.03 at mean
/// sensing SNR 5 dB (m=1, K=10, N=20, pf=0.03, P_F=0.02).
inline CheckResult check_headline(const Options& opt) {
  auto sf = scenario::load(opt.preset_dir + "/fig11.json");
  auto net = sf.network;
  auto rt = simkit::prepare(net);
  auto est = simkit::calibrate_lambda(net, rt, net.target_system_pf, opt.trials_mid,
                                      opt.workers, 0);
  net.rule.lambda = est.lambda;
  auto pd = simkit::estimate_decision_rate(net, rt, true, opt.trials_mid, opt.workers,
                                           static_cast<uint64_t>(opt.trials_mid));
  bool pass = std::fabs(pd.value - 0.95) <= 0.03;
  return {"11 headline-0.95-at-5dB", pass, false,
          "cooperative P_D = " + detail::fmt(pd.value) + " +- " + detail::fmt(pd.ci95) +
              " at P_F target 0.02 (acceptance band 0.92..0.98)"};
}

/// 12. Calibration accuracy: achieved system false-alarm rate on fresh
/// trials within the binomial CI + 0.002 of the target at 1e5 trials.
inline CheckResult check_calibration(const Options& opt) {
  auto sf = scenario::load(opt.preset_dir + "/fusion_svi.json");
  auto net = sf.network;
  auto rt = simkit::prepare(net);
  double target = net.target_system_pf;
  auto est = simkit::calibrate_lambda(net, rt, target, opt.trials_mid, opt.workers, 0);
  net.rule.lambda = est.lambda;
  auto pf = simkit::estimate_decision_rate(net, rt, false, opt.trials_mid, opt.workers,
                                           static_cast<uint64_t>(opt.trials_mid));
  double budget = 1.96 * std::sqrt(target * (1.0 - target) / opt.trials_mid) + 0.002;
  bool pass = std::fabs(pf.value - target) <= budget;
  return {"12 calibration", pass, false,
          "achieved P_F = " + detail::fmt(pf.value) + " vs target " + detail::fmt(target) +
              " (budget " + detail::fmt(budget) + ")"};
}

/// 13. Determinism: identical scenario and seed produce byte-identical CSV
/// across repeated runs and across worker counts 1 and 4.
inline CheckResult check_determinism(const Options& opt) {
  if (!opt.cli_runner)
    return {"13 determinism", false, false, "no CLI runner wired in"};
  auto run = [&](const std::string& workers) {
    std::ostringstream os;
    int rc = opt.cli_runner({"local-roc", "--scenario",
                             opt.preset_dir + "/local_m1_n10.json", "--trials", "5000",
                             "--workers", workers},
                            os);
    return std::pair<int, std::string>(rc, os.str());
  };
  auto a = run("1");
  auto b = run("1");
  auto c = run("4");
  bool pass = a.first == 0 && b.first == 0 && c.first == 0 && a.second == b.second &&
              a.second == c.second && !a.second.empty();
  return {"13 determinism", pass, false,
          pass ? "byte-identical across reruns and workers {1,4}"
               : "outputs differ or runner failed"};
}

/// 14 (informational). Heterogeneous-severity preset dominates the all-m=1
/// preset's ROC at five false-alarm points.
inline CheckResult check_heterogeneous_dominance(const Options& opt) {
  auto hom = scenario::load(opt.preset_dir + "/fusion_svi.json");
  auto het = scenario::load(opt.preset_dir + "/heterogeneous_m.json");
  const long trials = opt.trials_mid;
  auto roc = [&](const scenario::ScenarioFile& sf) {
    auto rt = simkit::prepare(sf.network);
    auto h0 = simkit::collect_statistics(sf.network, rt, false, trials, opt.workers, 0);
    auto h1 = simkit::collect_statistics(sf.network, rt, true, trials, opt.workers,
                                         static_cast<uint64_t>(trials));
    std::sort(h0.begin(), h0.end());
    std::vector<double> pds;
    for (double pf : hom.pf_grid.materialize()) {
      long idx = std::clamp(static_cast<long>(std::ceil((1.0 - pf) * trials)) - 1, 0L,
                            trials - 1);
      long hits = 0;
      for (double v : h1)
        if (v > h0[idx]) ++hits;
      pds.push_back(static_cast<double>(hits) / trials);
    }
    return pds;
  };
  auto pd_hom = roc(hom);
  auto pd_het = roc(het);
  bool pass = true;
  std::ostringstream det;
  for (std::size_t i = 0; i < pd_hom.size(); ++i) {
    pass = pass && pd_het[i] >= pd_hom[i] - 0.002;
    det << (i ? "; " : "") << detail::fmt(pd_hom[i]) << " -> " << detail::fmt(pd_het[i]);
  }
  return {"14 heterogeneous-dominance (informational)", pass, true, det.str()};
}

inline std::vector<CheckResult> run_all(const Options& opt) {
  std::vector<CheckResult> out;
  out.push_back(check_threshold_inversion());
  out.push_back(check_local_pd_oracle(opt));
  out.push_back(check_local_pd_matrix(opt));
  out.push_back(check_physical_models_info(opt));
  out.push_back(check_route_equivalence());
  out.push_back(check_model_comparison());
  out.push_back(check_m_half(opt));
  out.push_back(check_spa_exactness());
  out.push_back(check_complexity_numbers());
  out.push_back(check_binomial_vs_counting(opt));
  out.push_back(check_optimal_l(opt));
  out.push_back(check_fusion_ordering(opt));
  out.push_back(check_headline(opt));
  out.push_back(check_calibration(opt));
  out.push_back(check_determinism(opt));
  out.push_back(check_heterogeneous_dominance(opt));
  return out;
}

}  // namespace validate
}  // namespace ccss

#endif  // CCSS_VALIDATE_HPP_
