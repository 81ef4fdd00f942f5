// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Command-line front end. Exit codes: 0 success, 1 validation failure,
// 2 schema or configuration error.
#ifndef CCSS_CLI_HPP_
#define CCSS_CLI_HPP_

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccss/experiments.hpp"
#include "ccss/scenario.hpp"
#include "ccss/table.hpp"
#include "ccss/validate.hpp"

namespace ccss {
namespace cli {

namespace detail {

struct CommonOpts {
  std::string scenario_path;
  std::string out_path;
  std::optional<long> trials;
  std::optional<uint64_t> seed;
  std::optional<std::string> model;
  std::string format = "csv";
  int workers = 1;
};

inline void add_common(CLI::App* cmd, CommonOpts& o, bool needs_scenario = true) {
  auto* s = cmd->add_option("--scenario", o.scenario_path, "scenario JSON path");
  if (needs_scenario) s->required();
  cmd->add_option("--out", o.out_path, "output path (default: stdout)");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials override");
  cmd->add_option("--seed", o.seed, "experiment seed override");
  cmd->add_option("--model", o.model, "analytic pd route: phi2|closed|complex|mc")
      ->check(CLI::IsMember({"phi2", "closed", "complex", "mc"}));
  cmd->add_option("--format", o.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 256));
}

inline scenario::ScenarioFile load_with_overrides(const CommonOpts& o) {
  auto sf = scenario::load(o.scenario_path);
  if (o.trials) sf.trials = *o.trials;
  if (o.seed) sf.network.seed = *o.seed;
  if (o.model) {
    if (*o.model == "phi2") sf.network.pd_route = simkit::PdRoute::phi2;
    else if (*o.model == "closed" || *o.model == "mc")
      sf.network.pd_route = simkit::PdRoute::closed;
    else sf.network.pd_route = simkit::PdRoute::complex;
  }
  return sf;
}

inline void emit(const table::Table& t, const CommonOpts& o, std::ostream& fallback) {
  std::ofstream file;
  std::ostream* os = &fallback;
  if (!o.out_path.empty()) {
    file.open(o.out_path);
    if (!file) throw scenario::SchemaError("cannot open output path: " + o.out_path);
    os = &file;
  }
  if (o.format == "json") table::write_json(t, *os);
  else table::write_csv(t, *os);
}

}  // namespace detail

/// Runs the CLI against explicit arguments; output goes to `out`, error text
/// to `err`. Usable in-process for the determinism checks.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"ccss: cooperative spectrum sensing toolkit"};
  app.require_subcommand(1);

  detail::CommonOpts roc_o, croc_o, sys_o, lopt_o;
  auto* roc = app.add_subcommand("local-roc", "local ROC of the first SU's sensing link");
  detail::add_common(roc, roc_o);
  auto* croc = app.add_subcommand("croc", "complementary local ROC (miss probability)");
  detail::add_common(croc, croc_o);
  auto* sys = app.add_subcommand("system-roc",
                                 "system ROC: counting closed forms plus the scenario "
                                 "rule measured at matched false-alarm targets");
  detail::add_common(sys, sys_o);
  auto* lopt = app.add_subcommand("lopt", "total error vs cooperating-SU count");
  detail::add_common(lopt, lopt_o);

  detail::CommonOpts cx_o;
  int cx_k = 1;
  std::vector<int> cx_levels;
  bool cx_census = false;
  auto* cx = app.add_subcommand("complexity", "message-count cost table");
  cx->add_option("--k", cx_k, "number of PU-SU-FC branches")->check(CLI::Range(1, 1000000));
  cx->add_option("--x", cx_levels, "domain cardinalities (repeatable)");
  cx->add_flag("--census", cx_census,
               "also print the quantized branch graph's degree/domain census");
  cx->add_option("--out", cx_o.out_path, "output path (default: stdout)");
  cx->add_option("--format", cx_o.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  validate::Options v_opt;
  std::string v_out;
  auto* val = app.add_subcommand("validate", "run the full oracle matrix");
  val->add_option("--trials", v_opt.trials_big,
                  "oracle-grade trial count (default 1e6)");
  val->add_option("--mid-trials", v_opt.trials_mid,
                  "fusion measurement trial count (default 1e5)");
  val->add_option("--workers", v_opt.workers, "worker threads")->check(CLI::Range(1, 256));
  val->add_option("--presets", v_opt.preset_dir, "preset directory (default: presets)");
  val->add_option("--out", v_out, "output path (default: stdout)");

  std::vector<const char*> argv;
  argv.push_back("ccss");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "ccss: " << e.what() << "\n";
    return 2;
  }

  try {
    if (roc->parsed()) {
      auto sf = detail::load_with_overrides(roc_o);
      detail::emit(experiments::local_roc(sf, roc_o.workers, false), roc_o, out);
      return 0;
    }
    if (croc->parsed()) {
      auto sf = detail::load_with_overrides(croc_o);
      detail::emit(experiments::local_roc(sf, croc_o.workers, true), croc_o, out);
      return 0;
    }
    if (sys->parsed()) {
      auto sf = detail::load_with_overrides(sys_o);
      detail::emit(experiments::system_roc(sf, sys_o.workers), sys_o, out);
      return 0;
    }
    if (lopt->parsed()) {
      auto sf = detail::load_with_overrides(lopt_o);
      detail::emit(experiments::l_sweep(sf), lopt_o, out);
      return 0;
    }
    if (cx->parsed()) {
      if (cx_levels.empty()) cx_levels = {2, 4};
      detail::emit(experiments::complexity(cx_k, cx_levels), cx_o, out);
      if (cx_census) {
        auto sensing = channels::FadingLink::from_snr_db(1.0, 4.0);
        auto reporting = channels::FadingLink::from_snr_db(1.0, 4.0);
        double tau = local_detect::threshold_from_pf(20, 1.0, 0.03);
        for (int x : cx_levels) {
          out << "# branch census at |X| = " << x << "\n";
          out << nfg::census_text(nfg::build_discretized_branch(
              0.5, true, sensing, reporting, 20, tau, x));
        }
      }
      return 0;
    }
    if (val->parsed()) {
      v_opt.cli_runner = [](const std::vector<std::string>& inner, std::ostream& os) {
        std::ostringstream sink;
        return run(inner, os, sink);
      };
      auto results = validate::run_all(v_opt);
      std::ofstream file;
      std::ostream* os = &out;
      if (!v_out.empty()) {
        file.open(v_out);
        if (!file) throw scenario::SchemaError("cannot open output path: " + v_out);
        os = &file;
      }
      bool all_pass = true;
      for (const auto& r : results) {
        *os << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << "\n";
        if (!r.informational) all_pass = all_pass && r.pass;
      }
      *os << (all_pass ? "RESULT: all gating checks passed\n"
                       : "RESULT: at least one gating check failed\n");
      return all_pass ? 0 : 1;
    }
  } catch (const scenario::SchemaError& e) {
    err << "ccss: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "ccss: " << e.what() << "\n";
    return 2;
  }
  err << "ccss: no command\n";
  return 2;
}

}  // namespace cli
}  // namespace ccss

#endif  // CCSS_CLI_HPP_
