// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "ccss/experiments.hpp"

using namespace ccss;
using Catch::Approx;

namespace {

scenario::ScenarioFile counting_file(int k_total) {
  std::string text = R"({
    "network": {
      "k": )" + std::to_string(k_total) + R"(,
      "samples_per_window": 20,
      "target_local_pf": 0.03,
      "sensing_snr_db": 8.0,
      "reporting_snr_db": 10.0,
      "fusion_rule": "counting",
      "count_threshold": 2
    },
    "experiment": {"trials": 30000, "seed": 11}
  })";
  return scenario::parse(text);
}

}  // namespace

TEST_CASE("system roc experiment") {
  auto sf = counting_file(5);
  auto t = experiments::system_roc(sf, 2);
  REQUIRE(t.columns.size() == 8);
  REQUIRE(t.rows.size() == 5);  // K1 = 5..1
  double prev_pf = -1.0;
  for (const auto& r : t.rows) {
    double pf_a = r[1], pd_a = r[2], pf_mc = r[4], pf_ci = r[5], pd_mc = r[6], pd_ci = r[7];
    CHECK(pf_a >= prev_pf);  // K1 descending -> analytic PF ascending
    prev_pf = pf_a;
    CHECK(pd_a >= pf_a);
    if (pf_a * 30000 > 100)  // enough tail mass to compare meaningfully
      CHECK(pf_mc == Approx(pf_a).margin(pf_ci + 0.005));
    CHECK(pd_mc == Approx(pd_a).margin(pd_ci + 0.005));
  }
}

TEST_CASE("pd vs snr experiment") {
  auto sf = counting_file(4);
  sf.network.rule.kind = fusion::FusionKind::lrt;
  scenario::GridSpec grid;
  grid.kind = "list";
  grid.values = {0.0, 10.0};
  sf.snr_grid_db = grid;
  sf.trials = 20000;
  auto t = experiments::pd_vs_snr(sf, 2);
  REQUIRE(t.rows.size() == 2);
  // cooperative detection improves with the mean sensing snr
  CHECK(t.rows[1][3] > t.rows[0][3]);
  // non-cooperative single-SU column is ordered too
  CHECK(t.rows[1][2] >= t.rows[0][2]);
  for (const auto& r : t.rows) {
    CHECK(r[3] >= 0.0);
    CHECK(r[3] <= 1.0);
  }
}

TEST_CASE("l sweep experiment rejects heterogeneous scenarios") {
  auto sf = counting_file(3);
  sf.network.links[1].sensing.sigma2 *= 2.0;
  CHECK_THROWS_AS(experiments::l_sweep(sf), std::domain_error);
}

TEST_CASE("heterogeneous counting tail") {
  SECTION("reduces to the binomial for identical probabilities") {
    std::vector<double> ps(12, 0.37);
    for (int j = 0; j <= 12; ++j)
      CHECK(sysperf::heterogeneous_counting_tail(ps, j) ==
            Approx(sysperf::system_pd(12, j, 0.37)).margin(1e-12));
  }
  SECTION("three-sensor hand case") {
    std::vector<double> ps{0.5, 0.1, 0.9};
    // P(count >= 2) = sum of the three pairs plus the triple
    double want = 0.5 * 0.1 * 0.1 + 0.5 * 0.9 * 0.9 + 0.5 * 0.1 * 0.9 + 0.5 * 0.1 * 0.9;
    CHECK(sysperf::heterogeneous_counting_tail(ps, 2) == Approx(want).margin(1e-15));
  }
}
