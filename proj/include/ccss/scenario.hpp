// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Scenario files: JSON documents describing the network and the experiment
// grid. Schema-validated before any computation; unknown keys are rejected.
#ifndef CCSS_SCENARIO_HPP_
#define CCSS_SCENARIO_HPP_

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccss/simkit.hpp"

namespace ccss {
namespace scenario {

/// Raised on schema violations; carries a human-readable location.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

struct GridSpec {
  std::string kind = "log";  // log | linear | list
  double lo = 0.01, hi = 0.99;
  int points = 20;
  std::vector<double> values;

  std::vector<double> materialize() const {
    if (kind == "list") return values;
    if (points < 2) throw SchemaError("grid: points >= 2");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) {
      double f = static_cast<double>(i) / (points - 1);
      out[i] = kind == "log" ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                             : lo + f * (hi - lo);
    }
    return out;
  }
};

struct ScenarioFile {
  std::string name;
  std::string description;
  simkit::NetworkScenario network;
  GridSpec pf_grid;
  GridSpec snr_grid_db{"linear", -20.0, 30.0, 11, {}};
  int l_lo = 1, l_hi = 0;  // l_hi 0 means "K"
  long trials = 10000;
  int workers = 1;
};

namespace detail {

using json = nlohmann::ordered_json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw SchemaError("unknown key \"" + it.key() + "\" in " + where);
}

inline std::vector<double> number_list(const json& v, int k_expected,
                                       const std::string& where) {
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(k_expected, v.get<double>());
    return out;
  }
  if (!v.is_array()) throw SchemaError(where + " must be a number or array");
  for (const auto& x : v) {
    if (!x.is_number()) throw SchemaError(where + " must hold numbers");
    out.push_back(x.get<double>());
  }
  if (static_cast<int>(out.size()) != k_expected)
    throw SchemaError(where + " must have K entries");
  return out;
}

inline GridSpec parse_grid(const json& v, const std::string& where) {
  GridSpec g;
  if (v.is_array()) {
    g.kind = "list";
    for (const auto& x : v) g.values.push_back(x.get<double>());
    return g;
  }
  reject_unknown(v, {"kind", "lo", "hi", "points", "values"}, where);
  g.kind = v.value("kind", std::string("log"));
  if (g.kind != "log" && g.kind != "linear" && g.kind != "list")
    throw SchemaError(where + ".kind must be log, linear or list");
  if (g.kind == "list") {
    if (!v.contains("values")) throw SchemaError(where + ".values required for list");
    for (const auto& x : v.at("values")) g.values.push_back(x.get<double>());
    return g;
  }
  g.lo = v.value("lo", g.lo);
  g.hi = v.value("hi", g.hi);
  g.points = v.value("points", g.points);
  if (!(g.lo < g.hi)) throw SchemaError(where + ": lo < hi required");
  return g;
}

}  // namespace detail

inline ScenarioFile parse(const std::string& text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line number for the message
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw SchemaError("json parse error at line " + std::to_string(line) + ": " +
                      e.what());
  }

  detail::reject_unknown(doc, {"name", "description", "network", "experiment"}, "root");
  if (!doc.contains("network")) throw SchemaError("missing \"network\" section");

  ScenarioFile sf;
  sf.name = doc.value("name", std::string("scenario"));
  sf.description = doc.value("description", std::string());

  const auto& net = doc.at("network");
  detail::reject_unknown(net,
                         {"k", "samples_per_window", "target_local_pf",
                          "sensing_noise_sigma2", "reporting_noise_sigma2", "sensing_m",
                          "reporting_m", "sensing_snr_db", "reporting_snr_db",
                          "fusion_rule", "count_threshold", "target_system_pf"},
                         "network");
  if (!net.contains("k")) throw SchemaError("network.k required");
  int k_total = net.at("k").get<int>();
  if (k_total < 1) throw SchemaError("network.k must be >= 1");

  auto sens_m = detail::number_list(net.value("sensing_m", detail::json(1.0)), k_total,
                                    "network.sensing_m");
  auto rep_m = detail::number_list(net.value("reporting_m", detail::json(1.0)), k_total,
                                   "network.reporting_m");
  if (!net.contains("sensing_snr_db")) throw SchemaError("network.sensing_snr_db required");
  if (!net.contains("reporting_snr_db"))
    throw SchemaError("network.reporting_snr_db required");
  auto sens_snr = detail::number_list(net.at("sensing_snr_db"), k_total,
                                      "network.sensing_snr_db");
  auto rep_snr = detail::number_list(net.at("reporting_snr_db"), k_total,
                                     "network.reporting_snr_db");
  double sens_noise = net.value("sensing_noise_sigma2", 1.0);
  double rep_noise = net.value("reporting_noise_sigma2", 1.0);

  for (int i = 0; i < k_total; ++i) {
    if (!(sens_m[i] >= 0.5) || !(rep_m[i] >= 0.5))
      throw SchemaError("network m values must be >= 0.5");
    sf.network.links.push_back(
        {channels::FadingLink::from_snr_db(sens_m[i], sens_snr[i], sens_noise),
         channels::FadingLink::from_snr_db(rep_m[i], rep_snr[i], rep_noise)});
  }
  sf.network.n_samples = net.value("samples_per_window", 20);
  sf.network.target_local_pf = net.value("target_local_pf", 0.03);
  sf.network.target_system_pf = net.value("target_system_pf", 0.02);

  std::string rule = net.value("fusion_rule", std::string("lrt"));
  if (rule == "lrt") sf.network.rule.kind = fusion::FusionKind::lrt;
  else if (rule == "egc") sf.network.rule.kind = fusion::FusionKind::egc;
  else if (rule == "mrc") sf.network.rule.kind = fusion::FusionKind::mrc;
  else if (rule == "counting") sf.network.rule.kind = fusion::FusionKind::counting;
  else throw SchemaError("network.fusion_rule must be lrt, egc, mrc or counting");
  sf.network.rule.count_threshold = net.value("count_threshold", (k_total + 1) / 2);

  if (doc.contains("experiment")) {
    const auto& ex = doc.at("experiment");
    detail::reject_unknown(ex,
                           {"trials", "seed", "model", "sensing_sim_model", "pf_grid",
                            "snr_grid_db", "l_range", "workers"},
                           "experiment");
    sf.trials = ex.value("trials", sf.trials);
    sf.workers = ex.value("workers", sf.workers);
    sf.network.seed = ex.value("seed", static_cast<uint64_t>(1));
    std::string model = ex.value("model", std::string("closed"));
    if (model == "phi2") sf.network.pd_route = simkit::PdRoute::phi2;
    else if (model == "closed") sf.network.pd_route = simkit::PdRoute::closed;
    else if (model == "complex") sf.network.pd_route = simkit::PdRoute::complex;
    else if (model == "mc") sf.network.pd_route = simkit::PdRoute::closed;  // mc adds no analytic route
    else throw SchemaError("experiment.model must be phi2, closed, complex or mc");
    std::string sim = ex.value("sensing_sim_model", std::string("literal"));
    if (sim == "literal") sf.network.sensing_model = simkit::SensingModel::literal;
    else if (sim == "block") sf.network.sensing_model = simkit::SensingModel::block;
    else if (sim == "per_sample") sf.network.sensing_model = simkit::SensingModel::per_sample;
    else throw SchemaError("experiment.sensing_sim_model must be literal, block or per_sample");
    if (ex.contains("pf_grid")) sf.pf_grid = detail::parse_grid(ex.at("pf_grid"), "pf_grid");
    if (ex.contains("snr_grid_db"))
      sf.snr_grid_db = detail::parse_grid(ex.at("snr_grid_db"), "snr_grid_db");
    if (ex.contains("l_range")) {
      const auto& lr = ex.at("l_range");
      detail::reject_unknown(lr, {"lo", "hi"}, "l_range");
      sf.l_lo = lr.value("lo", 1);
      sf.l_hi = lr.value("hi", 0);
    }
  }

  sf.network.validate();
  double prev = 0.0;
  for (double pf : sf.pf_grid.materialize()) {
    if (!(pf > 0.0 && pf < 1.0) || pf <= prev)
      throw SchemaError("pf_grid must be strictly increasing inside (0,1)");
    prev = pf;
  }
  return sf;
}

inline ScenarioFile load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace scenario
}  // namespace ccss

#endif  // CCSS_SCENARIO_HPP_
