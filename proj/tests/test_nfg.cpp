// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccss/ccss_graph.hpp"
#include "ccss/local_detect.hpp"
#include "ccss/nfg.hpp"
#include "ccss/specfun.hpp"
#include "support/graph_gen.hpp"
#include "support/oracles.hpp"

using namespace ccss;
using Catch::Approx;

namespace {

void check_beliefs_match(const nfg::Graph& g, double tol = 1e-12) {
  auto spa = nfg::run_spa(g);
  auto bf = ccss_test::brute_force_marginals(g);
  REQUIRE(spa.beliefs.size() == bf.marginals.size());
  for (std::size_t e = 0; e < spa.beliefs.size(); ++e) {
    for (std::size_t v = 0; v < spa.beliefs[e].size(); ++v) {
      INFO("edge " << e << " value " << v);
      CHECK(spa.beliefs[e][v] ==
            Approx(bf.marginals[e][v]).epsilon(tol).margin(tol));
    }
  }
}

}  // namespace

TEST_CASE("single factor graph: beliefs equal factor marginals") {
  nfg::Graph g;
  int a = g.add_edge("a", 2), b = g.add_edge("b", 3);
  g.add_factor("f", {a, b}, {0.1, 0.4, 0.2, 0.15, 0.05, 0.1});
  check_beliefs_match(g);
}

TEST_CASE("degree-2 edge passes messages through") {
  nfg::Graph g;
  int a = g.add_edge("a", 2);
  g.add_factor("leaf", {a}, {0.3, 0.7});
  int b = g.add_edge("b", 2);
  g.add_factor("mid", {a, b}, {1.0, 0.0, 0.0, 1.0});  // identity coupling
  auto spa = nfg::run_spa(g);
  // the leaf marginal must arrive unchanged on the far edge
  CHECK(spa.beliefs[1][0] == Approx(0.3).epsilon(1e-14));
  CHECK(spa.beliefs[1][1] == Approx(0.7).epsilon(1e-14));
}

TEST_CASE("uniform kernel emits uniform messages") {
  nfg::Graph g;
  int a = g.add_edge("a", 4);
  int b = g.add_edge("b", 4);
  g.add_factor("u", {a, b}, nfg::Table(16, 1.0));
  auto spa = nfg::run_spa(g);
  for (double v : spa.beliefs[0]) CHECK(v == Approx(0.25).epsilon(1e-14));
}

TEST_CASE("equality node is a normalized elementwise product") {
  nfg::Graph g;
  int a = g.add_edge("a", 2), b = g.add_edge("b", 2), c = g.add_edge("c", 2);
  g.add_equality("eq", {a, b, c});
  g.add_factor("fa", {a}, {0.2, 0.8});
  g.add_factor("fb", {b}, {0.5, 0.5});
  g.add_factor("fc", {c}, {0.9, 0.1});
  auto spa = nfg::run_spa(g);
  double z = 0.2 * 0.5 * 0.9 + 0.8 * 0.5 * 0.1;
  for (int e = 0; e < 3; ++e) {
    CHECK(spa.beliefs[e][0] == Approx(0.2 * 0.5 * 0.9 / z).epsilon(1e-13));
  }
  check_beliefs_match(g);
}

TEST_CASE("three-variable binary factor against the explicit triple sum") {
  nfg::Graph g;
  int a = g.add_edge("a", 2), b = g.add_edge("b", 2), c = g.add_edge("c", 2);
  nfg::Table k(8);
  for (int i = 0; i < 8; ++i) k[i] = 0.05 + 0.11 * i;
  g.add_factor("f", {a, b, c}, k);
  g.add_factor("prior_b", {b}, {0.25, 0.75});
  check_beliefs_match(g);
}

TEST_CASE("chain of four binary factors: forward-backward equivalence") {
  nfg::Graph g;
  std::vector<int> x(5);
  x[0] = g.add_edge("x0", 2);
  for (int i = 0; i < 4; ++i) {
    x[i + 1] = g.add_edge("x" + std::to_string(i + 1), 2);
    nfg::Table k = {0.6 + 0.01 * i, 0.4, 0.3, 0.7 - 0.01 * i};
    g.add_factor("f" + std::to_string(i), {x[i], x[i + 1]}, k);
  }
  check_beliefs_match(g);
}

TEST_CASE("fig-1 topology: seven variables, six factors, one equality") {
  // f(x1..x7) = fA(x1,x2,x3,x4) fB(x1,x5) fC(x2,x7) fD(x4) fE(x5) fF(x5,x6)
  nfg::Graph g;
  int x1 = g.add_edge("x1", 2), x2 = g.add_edge("x2", 2), x3 = g.add_edge("x3", 2);
  int x4 = g.add_edge("x4", 2);
  int x5b = g.add_edge("x5_b", 2), x5e = g.add_edge("x5_e", 2), x5f = g.add_edge("x5_f", 2);
  int x6 = g.add_edge("x6", 2), x7 = g.add_edge("x7", 2);
  ccss::rng::Stream rs(99, 0, 0);
  auto rnd = [&](std::size_t n) {
    nfg::Table t(n);
    for (auto& v : t) v = 0.1 + rs.uniform01();
    return t;
  };
  g.add_factor("fA", {x1, x2, x3, x4}, rnd(16));
  g.add_factor("fB", {x1, x5b}, rnd(4));
  g.add_factor("fC", {x2, x7}, rnd(4));
  g.add_factor("fD", {x4}, rnd(2));
  g.add_factor("fE", {x5e}, rnd(2));
  g.add_factor("fF", {x5f, x6}, rnd(4));
  g.add_equality("eq_x5", {x5b, x5e, x5f});
  check_beliefs_match(g);

  // every directed message exactly once: two per edge
  auto spa = nfg::run_spa(g);
  CHECK(spa.messages.size() == 2u * g.num_edges());
}

TEST_CASE("random acyclic graphs match brute force") {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    auto g = ccss_test::random_acyclic_graph(seed);
    INFO("seed " << seed << ": " << g.num_edges() << " edges");
    check_beliefs_match(g);
    auto spa = nfg::run_spa(g);
    CHECK(spa.messages.size() == 2u * g.num_edges());
    CHECK(nfg::tree_partition_function(g) ==
          Approx(ccss_test::brute_force_marginals(g).partition).epsilon(1e-12));
  }
}

TEST_CASE("cyclic graphs are refused") {
  nfg::Graph g;
  int a = g.add_edge("a", 2), b = g.add_edge("b", 2);
  g.add_factor("f1", {a, b}, {0.3, 0.7, 0.6, 0.4});
  g.add_factor("f2", {a, b}, {0.5, 0.5, 0.2, 0.8});  // closes a 2-cycle
  CHECK_THROWS_AS(nfg::run_spa(g), std::runtime_error);
}

TEST_CASE("ccss branch marginal") {
  auto rep = channels::FadingLink::from_snr_db(1.0, 4.0);

  SECTION("pd = pf makes the hypotheses indistinguishable") {
    auto [g0, g1] = nfg::ccss_branch_marginal(0.8, 0.4, 0.4, rep);
    CHECK(g0 == Approx(g1).epsilon(1e-15));
  }
  SECTION("uninformative report: density independent of u") {
    // sigma_v -> 0 collapses P(y|u) to N(0, sigma_n^2) for both signs
    channels::FadingLink tiny{1.0, 1e-14, 1.0};
    auto [g0, g1] = nfg::ccss_branch_marginal(0.6, 0.9, 0.05, tiny);
    CHECK(g0 == Approx(g1).epsilon(1e-6));
  }
  SECTION("derived values by direct quadrature of message (xi)") {
    // y = 0.7, pd = 0.9, pf = 0.03, m = 1 reporting link
    double y = 0.7, pd = 0.9, pf = 0.03;
    auto env_quad = [&](int u) {
      double sv2 = rep.sigma2, sn2 = rep.noise_sigma2, m = rep.m;
      return ccss_test::quad_to_inf(
          [&](double c) {
            double nak = 2.0 * std::pow(c, 2.0 * m - 1.0) / std::tgamma(m) *
                         std::pow(1.0 / (2.0 * sv2), m) *
                         std::exp(-c * c / (2.0 * sv2));
            double d = y - u * c;
            return nak * std::exp(-d * d / (2.0 * sn2)) /
                   std::sqrt(2.0 * M_PI * sn2);
          },
          0.0, 1e-13);
    };
    double pm1 = env_quad(-1), pp1 = env_quad(+1);
    auto [g0, g1] = nfg::ccss_branch_marginal(y, pd, pf, rep);
    CHECK(g0 == Approx(pm1 * (1.0 - pf) + pp1 * pf).epsilon(1e-8));
    CHECK(g1 == Approx(pm1 * (1.0 - pd) + pp1 * pd).epsilon(1e-8));
  }
  SECTION("full schedule carries the density pair through") {
    auto s = nfg::analytic_branch_schedule(0.7, 0.9, 0.03, rep);
    CHECK(s.m_y_to_pyu == 1.0);
    CHECK(s.m_h_to_pthz == 1.0);
    CHECK(s.m_pyuv_to_u[0] == Approx(s.m_t_to_pthz[0]).epsilon(1e-15));
    CHECK(s.m_pyuv_to_u[1] == Approx(s.m_put_to_t[1]).epsilon(1e-15));
  }
  SECTION("accumulated branch product equals the fusion likelihood product") {
    std::vector<fusion::SuStats> su{{0.9, 0.03, rep},
                                    {0.6, 0.1, channels::FadingLink::from_snr_db(2.0, 7.0)}};
    std::vector<double> y{0.7, -0.4};
    auto [l0, l1] = nfg::ccss_accumulated_log_likelihoods(y, su);
    double want0 = 0.0, want1 = 0.0;
    for (int k = 0; k < 2; ++k) {
      auto [h0, h1] = fusion::branch_likelihoods(y[k], su[k].pd, su[k].pf, su[k].reporting);
      want0 += std::log(h0);
      want1 += std::log(h1);
    }
    CHECK(l0 == Approx(want0).margin(1e-12));
    CHECK(l1 == Approx(want1).margin(1e-12));
    CHECK(l1 - l0 == Approx(fusion::log_lrt_statistic(y, su)).margin(1e-12));
  }
}

TEST_CASE("complexity accounting") {
  SECTION("paper's worked numbers") {
    auto c1 = nfg::ccss_complexity(1, 2);
    CHECK(c1.num_vars == 6);
    CHECK(c1.c_fg == 60ull);
    CHECK(c1.c_cn == 384ull);
    auto c10 = nfg::ccss_complexity(10, 2);
    CHECK(c10.num_vars == 40);
    CHECK(c10.c_fg == 280ull);
    CHECK(c10.c_cn == 640ull);
    auto c10x4 = nfg::ccss_complexity(10, 4);
    CHECK(c10x4.c_fg == 1040ull);
    CHECK(c10x4.c_cn == 10240ull);
  }
  SECTION("c_fg beats explicit marginalization when D < M and M >= 3") {
    for (uint64_t seed = 100; seed < 112; ++seed) {
      auto g = ccss_test::random_acyclic_graph(seed, 8, 2);
      auto census = g.degree_census();
      int max_deg = census.rbegin()->first;
      int m_vars = g.num_edges();
      if (max_deg < m_vars && m_vars >= 3) {
        CHECK(nfg::complexity_fg(census, 2) < nfg::complexity_explicit(m_vars, 2));
      }
    }
  }
}

TEST_CASE("discretized branch demo") {
  auto sensing = channels::FadingLink::from_snr_db(1.0, 4.0);
  auto rep = channels::FadingLink::from_snr_db(1.0, 4.0);
  int n_samples = 10;
  double tau = 2.0 * specfun::inv_reg_upper_gamma(10.0, 0.1);
  double y = 0.7;

  SECTION("census matches the per-branch cost model") {
    auto g = nfg::build_discretized_branch(y, true, sensing, rep, n_samples, tau, 4);
    auto census = g.degree_census();
    CHECK(census[1] == 2);
    CHECK(census[2] == 3);
    CHECK(g.num_edges() == 4);
    auto spa = nfg::run_spa(g);
    CHECK(spa.beliefs.size() == 4u);
    // SPA on the discrete branch is still exact
    auto bf = ccss_test::brute_force_marginals(g);
    for (std::size_t e = 0; e < spa.beliefs.size(); ++e)
      for (std::size_t v = 0; v < spa.beliefs[e].size(); ++v)
        CHECK(spa.beliefs[e][v] == Approx(bf.marginals[e][v]).margin(1e-12));
  }
  SECTION("partition function approaches the analytic branch marginal") {
    // pd of the quantized chain tends to the closed-form pd as |X| grows
    double pdv = local_detect::pd_general_m(
        sensing, local_detect::DetectorSpec{10, 0.1, 1.0, tau}).pd;
    auto [g0, g1] = nfg::ccss_branch_marginal(
        y, pdv, local_detect::pf_from_threshold(10, 1.0, tau), rep);
    double z8 = nfg::tree_partition_function(
        nfg::build_discretized_branch(y, true, sensing, rep, n_samples, tau, 8));
    double z64 = nfg::tree_partition_function(
        nfg::build_discretized_branch(y, true, sensing, rep, n_samples, tau, 64));
    CHECK(std::fabs(z64 - g1) < std::fabs(z8 - g1) + 1e-12);
    CHECK(z64 == Approx(g1).epsilon(0.02));
  }
}
