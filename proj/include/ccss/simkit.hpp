// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Monte Carlo harness for the PU -> SU -> FC chain. Every trial draws from a
// counter-based stream keyed by (seed, SU index, trial index), so estimates
// are bitwise independent of how trials are partitioned across workers.
#ifndef CCSS_SIMKIT_HPP_
#define CCSS_SIMKIT_HPP_

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ccss/channels.hpp"
#include "ccss/fusion.hpp"
#include "ccss/local_detect.hpp"
#include "ccss/sysperf.hpp"

namespace ccss {
namespace simkit {

/// How the sensing-window statistic is simulated under H1.
///  - literal:    one Nakagami envelope of signal energy plus N+1 complex
///                noise samples; the exact law of the closed-form analytics.
///  - block:      envelope drawn once per window, phase fresh per sample,
///                z(n) = h e^{j theta(n)} across N samples.
///  - per_sample: fresh envelope every sample.
enum class SensingModel { literal, block, per_sample };

inline const char* to_string(SensingModel m) {
  switch (m) {
    case SensingModel::literal: return "literal";
    case SensingModel::block: return "block";
    case SensingModel::per_sample: return "per_sample";
  }
  return "?";
}

struct SuLink {
  channels::FadingLink sensing;
  channels::FadingLink reporting;
};

/// Which analytic p_d feeds the LRT weights and closed-form columns:
/// phi2 = the general series; closed = the per-m closed form; complex = the
/// approximate complex-representation model.
enum class PdRoute { phi2, closed, complex };

inline const char* to_string(PdRoute r) {
  switch (r) {
    case PdRoute::phi2: return "phi2";
    case PdRoute::closed: return "closed";
    case PdRoute::complex: return "complex";
  }
  return "?";
}

struct NetworkScenario {
  std::vector<SuLink> links;            // one per SU
  int n_samples = 20;                   // N
  double target_local_pf = 0.03;
  fusion::FusionRule rule;
  double target_system_pf = 0.02;
  uint64_t seed = 1;
  SensingModel sensing_model = SensingModel::literal;
  fusion::LrtRoute lrt_route = fusion::LrtRoute::density;
  PdRoute pd_route = PdRoute::closed;

  int k_total() const { return static_cast<int>(links.size()); }

  void validate() const {
    if (links.empty()) throw std::domain_error("NetworkScenario: K >= 1");
    for (const auto& l : links) {
      l.sensing.validate();
      l.reporting.validate();
    }
    if (n_samples < 1) throw std::domain_error("NetworkScenario: N >= 1");
    if (!(target_local_pf > 0.0 && target_local_pf < 1.0))
      throw std::domain_error("NetworkScenario: local pf in (0,1)");
    if (!(target_system_pf > 0.0 && target_system_pf < 1.0))
      throw std::domain_error("NetworkScenario: system PF in (0,1)");
    rule.validate(k_total());
  }
};

/// Quantities derived once per scenario: thresholds from the local pf target,
/// per-SU analytic operating points, MRC weights.
struct ScenarioRuntime {
  local_detect::DetectorSpec detector;        // identical detectors per SU
  std::vector<fusion::SuStats> su_stats;      // pd/pf per SU for the LRT
  std::vector<double> mrc_weights;            // sqrt(alpha_sf)
};

inline ScenarioRuntime prepare(const NetworkScenario& sc) {
  sc.validate();
  ScenarioRuntime rt;
  const double noise = sc.links.front().sensing.noise_sigma2;
  for (const auto& l : sc.links)
    if (l.sensing.noise_sigma2 != noise)
      throw std::domain_error("prepare: per-SU sensing noise must agree (single tau)");
  rt.detector = local_detect::make_detector(sc.n_samples, noise, sc.target_local_pf);
  for (const auto& l : sc.links) {
    local_detect::PdModel model = local_detect::PdModel::phi2_general;
    switch (sc.pd_route) {
      case PdRoute::phi2: model = local_detect::PdModel::phi2_general; break;
      case PdRoute::closed: model = local_detect::closed_form_for(l.sensing.m); break;
      case PdRoute::complex: model = local_detect::PdModel::complex_regime; break;
    }
    auto pt = local_detect::pd_point(l.sensing, rt.detector, model);
    rt.su_stats.push_back({pt.pd, pt.pf, l.reporting});
    rt.mrc_weights.push_back(std::sqrt(l.reporting.alpha()));
  }
  return rt;
}

struct TrialOutcome {
  bool under_h1 = false;
  std::vector<int> u;       // local decisions, +-1
  std::vector<double> y;    // received scalars at the FC
  double statistic = 0.0;   // FC statistic under the scenario's rule
  int decision = 0;         // +-1
};

namespace detail {

inline double sense_statistic(const NetworkScenario& sc, const channels::FadingLink& link,
                              bool under_h1, rng::Stream& rs) {
  const int n = sc.n_samples;
  const double sw2 = link.noise_sigma2;
  const double sw = std::sqrt(sw2);
  switch (sc.sensing_model) {
    case SensingModel::literal: {
      double t = 2.0 * sw2 * rs.gamma(static_cast<double>(n), 1.0);
      if (under_h1) {
        double h = channels::sample_nakagami_envelope(link, rs);
        double re = h + sw * rs.normal();
        double im = sw * rs.normal();
        t += re * re + im * im;
      }
      return t;
    }
    case SensingModel::block: {
      double h = under_h1 ? channels::sample_nakagami_envelope(link, rs) : 0.0;
      double t = 0.0;
      for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * rs.uniform01();
        double re = h * std::cos(th) + sw * rs.normal();
        double im = h * std::sin(th) + sw * rs.normal();
        t += re * re + im * im;
      }
      return t;
    }
    case SensingModel::per_sample: {
      double t = 0.0;
      for (int i = 0; i < n; ++i) {
        double h = under_h1 ? channels::sample_nakagami_envelope(link, rs) : 0.0;
        double th = 2.0 * M_PI * rs.uniform01();
        double re = h * std::cos(th) + sw * rs.normal();
        double im = h * std::sin(th) + sw * rs.normal();
        t += re * re + im * im;
      }
      return t;
    }
  }
  throw std::logic_error("sense_statistic: bad model");
}

}  // namespace detail

/// One end-to-end trial. Stream identity is (seed, SU index + 1, trial), so
/// the same trial index reproduces bit-identically anywhere.
inline TrialOutcome run_trial(const NetworkScenario& sc, const ScenarioRuntime& rt,
                              bool under_h1, uint64_t trial) {
  TrialOutcome out;
  out.under_h1 = under_h1;
  const int k_total = sc.k_total();
  out.u.resize(k_total);
  out.y.resize(k_total);
  for (int k = 0; k < k_total; ++k) {
    rng::Stream rs(sc.seed, static_cast<uint64_t>(k) + 1, trial);
    double t = detail::sense_statistic(sc, sc.links[k].sensing, under_h1, rs);
    out.u[k] = t > rt.detector.tau ? 1 : -1;
    double h = channels::sample_nakagami_envelope(sc.links[k].reporting, rs);
    double g = std::sqrt(sc.links[k].reporting.noise_sigma2) * rs.normal();
    out.y[k] = out.u[k] * h + g;
  }
  switch (sc.rule.kind) {
    case fusion::FusionKind::lrt:
      out.statistic = fusion::log_lrt_statistic(out.y, rt.su_stats, sc.lrt_route);
      out.decision = out.statistic > sc.rule.lambda ? 1 : -1;
      break;
    case fusion::FusionKind::egc:
      out.statistic = fusion::egc_statistic(out.y);
      out.decision = out.statistic > sc.rule.lambda ? 1 : -1;
      break;
    case fusion::FusionKind::mrc:
      out.statistic = fusion::mrc_statistic(out.y, rt.mrc_weights);
      out.decision = out.statistic > sc.rule.lambda ? 1 : -1;
      break;
    case fusion::FusionKind::counting: {
      std::vector<int> votes(k_total);
      int count = 0;
      for (int k = 0; k < k_total; ++k) {
        votes[k] = out.y[k] >= 0.0 ? 1 : -1;
        if (votes[k] == 1) ++count;
      }
      out.statistic = static_cast<double>(count);
      out.decision = fusion::counting_fuse(votes, sc.rule.count_threshold);
      break;
    }
  }
  return out;
}

struct EstimateWithCI {
  double value = 0.0;
  long trials = 0;
  double ci95 = 0.0;
};

inline EstimateWithCI make_estimate(long hits, long trials) {
  EstimateWithCI e;
  e.trials = trials;
  e.value = static_cast<double>(hits) / static_cast<double>(trials);
  e.ci95 = 1.96 * std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(trials));
  return e;
}

namespace detail {

template <typename Fn>
void parallel_trials(long trials, uint64_t offset, int workers, Fn&& per_range) {
  if (workers < 1) workers = 1;
  if (workers == 1) {
    per_range(0, offset, offset + static_cast<uint64_t>(trials));
    return;
  }
  std::vector<std::thread> pool;
  long chunk = (trials + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    uint64_t lo = offset + static_cast<uint64_t>(w) * chunk;
    uint64_t hi = std::min<uint64_t>(offset + trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&per_range, w, lo, hi] { per_range(w, lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Frequency of FC decision == +1 under the given hypothesis.
inline EstimateWithCI estimate_decision_rate(const NetworkScenario& sc,
                                             const ScenarioRuntime& rt, bool under_h1,
                                             long trials, int workers = 1,
                                             uint64_t trial_offset = 0) {
  if (trials < 1000) throw std::domain_error("estimate: trials >= 1000");
  std::vector<long> hits(static_cast<std::size_t>(std::max(workers, 1)), 0);
  detail::parallel_trials(trials, trial_offset, workers,
                          [&](int w, uint64_t lo, uint64_t hi) {
                            long h = 0;
                            for (uint64_t t = lo; t < hi; ++t)
                              if (run_trial(sc, rt, under_h1, t).decision == 1) ++h;
                            hits[w] = h;
                          });
  long total = std::accumulate(hits.begin(), hits.end(), 0L);
  return make_estimate(total, trials);
}

/// Per-SU frequency of u_k == +1.
inline std::vector<EstimateWithCI> estimate_local_rates(const NetworkScenario& sc,
                                                        const ScenarioRuntime& rt,
                                                        bool under_h1, long trials,
                                                        int workers = 1,
                                                        uint64_t trial_offset = 0) {
  if (trials < 1000) throw std::domain_error("estimate: trials >= 1000");
  const int k_total = sc.k_total();
  std::vector<std::vector<long>> hits(static_cast<std::size_t>(std::max(workers, 1)),
                                      std::vector<long>(k_total, 0));
  detail::parallel_trials(trials, trial_offset, workers,
                          [&](int w, uint64_t lo, uint64_t hi) {
                            for (uint64_t t = lo; t < hi; ++t) {
                              auto out = run_trial(sc, rt, under_h1, t);
                              for (int k = 0; k < k_total; ++k)
                                if (out.u[k] == 1) ++hits[w][k];
                            }
                          });
  std::vector<EstimateWithCI> rates;
  for (int k = 0; k < k_total; ++k) {
    long total = 0;
    for (const auto& h : hits) total += h[k];
    rates.push_back(make_estimate(total, trials));
  }
  return rates;
}

/// FC statistic samples under the given hypothesis (for calibration).
inline std::vector<double> collect_statistics(const NetworkScenario& sc,
                                              const ScenarioRuntime& rt, bool under_h1,
                                              long trials, int workers = 1,
                                              uint64_t trial_offset = 0) {
  std::vector<double> stats(static_cast<std::size_t>(trials));
  detail::parallel_trials(trials, trial_offset, workers,
                          [&](int, uint64_t lo, uint64_t hi) {
                            for (uint64_t t = lo; t < hi; ++t)
                              stats[static_cast<std::size_t>(t - trial_offset)] =
                                  run_trial(sc, rt, under_h1, t).statistic;
                          });
  return stats;
}

/// FC threshold for a target system false-alarm probability: empirical
/// quantile of the H0 statistic (all-noise sensing; decisions still taken
/// and reported over fading), with a bootstrap interval.
inline fusion::LambdaEstimate calibrate_lambda(const NetworkScenario& sc,
                                               const ScenarioRuntime& rt,
                                               double target_pf, long trials,
                                               int workers = 1,
                                               uint64_t trial_offset = 0) {
  if (trials < 10000) throw std::domain_error("calibrate_lambda: trials >= 1e4");
  auto stats = collect_statistics(sc, rt, false, trials, workers, trial_offset);
  return fusion::calibrate_lambda_from_samples(std::move(stats), target_pf,
                                               sc.seed ^ 0xCA11B007ull);
}

}  // namespace simkit
}  // namespace ccss

#endif  // CCSS_SIMKIT_HPP_
