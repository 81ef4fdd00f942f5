// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: runs every gating check at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is nonzero if any
// gating criterion fails.
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccss/cli.hpp"
#include "ccss/validate.hpp"

#ifndef CCSS_PRESET_DIR
#define CCSS_PRESET_DIR "presets"
#endif

int main(int argc, char** argv) {
  ccss::validate::Options opt;
  opt.trials_big = 1000000;
  opt.trials_mid = 100000;
  opt.workers = 4;
  opt.preset_dir = CCSS_PRESET_DIR;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--quick") {  // reduced-scale run for local iteration
      opt.trials_big = 100000;
      opt.trials_mid = 20000;
    } else if (a == "--workers" && i + 1 < argc) {
      opt.workers = std::atoi(argv[++i]);
    }
  }
  opt.cli_runner = [](const std::vector<std::string>& args, std::ostream& os) {
    std::ostringstream err;
    return ccss::cli::run(args, os, err);
  };

  auto results = ccss::validate::run_all(opt);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%s  %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    if (!r.informational) all_pass = all_pass && r.pass;
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: at least one criterion failed");
  return all_pass ? 0 : 1;
}
