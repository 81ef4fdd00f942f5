// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Independent oracles used by the validation surface (the `validate`
// command and the acceptance suite): brute-force factor-graph
// marginalization, random acyclic graph generation, and Monte Carlo
// samplers of the analytic test-statistic laws. Nothing here reuses the
// code paths it is meant to check.
#ifndef CCSS_ORACLE_HPP_
#define CCSS_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ccss/nfg.hpp"
#include "ccss/rng.hpp"

namespace ccss {
namespace oracle {

struct BruteForce {
  std::vector<std::vector<double>> marginals;
  double partition = 0.0;
};

/// Enumerates every edge assignment; weight = product of node kernels with
/// equality nodes as agreement indicators.
inline BruteForce brute_force_marginals(const nfg::Graph& g) {
  const int ne = g.num_edges();
  std::vector<int> card(ne);
  long total = 1;
  for (int e = 0; e < ne; ++e) {
    card[e] = g.card(e);
    total *= card[e];
  }
  BruteForce out;
  out.marginals.assign(ne, {});
  for (int e = 0; e < ne; ++e) out.marginals[e].assign(card[e], 0.0);

  std::vector<int> assign(ne, 0);
  for (long it = 0; it < total; ++it) {
    long rem = it;
    for (int e = 0; e < ne; ++e) {
      assign[e] = static_cast<int>(rem % card[e]);
      rem /= card[e];
    }
    double w = 1.0;
    for (int n = 0; n < g.num_nodes() && w != 0.0; ++n) {
      const auto& node = g.node(n);
      if (node.is_equality) {
        for (std::size_t i = 1; i < node.edges.size(); ++i)
          if (assign[node.edges[i]] != assign[node.edges[0]]) {
            w = 0.0;
            break;
          }
        continue;
      }
      std::size_t flat = 0;
      for (int e : node.edges) flat = flat * g.card(e) + assign[e];
      w *= node.kernel[flat];
    }
    if (w == 0.0) continue;
    out.partition += w;
    for (int e = 0; e < ne; ++e) out.marginals[e][assign[e]] += w;
  }
  for (auto& m : out.marginals) {
    double s = 0.0;
    for (double v : m) s += v;
    if (s > 0.0)
      for (double& v : m) v /= s;
  }
  return out;
}

/// Random acyclic graph: grows a tree by attaching factor or equality nodes
/// to open (half) edges; remaining open edges stay half-edges.
inline nfg::Graph random_acyclic_graph(uint64_t seed, int max_edges = 10,
                                       int max_card = 4) {
  rng::Stream rs(seed, 0x6AF, 0);
  nfg::Graph g;
  auto rand_card = [&] { return 2 + static_cast<int>(rs.uniform01() * (max_card - 1)); };
  auto rand_kernel = [&](std::size_t n) {
    nfg::Table t(n);
    for (auto& v : t) v = 0.05 + rs.uniform01();
    return t;
  };

  std::vector<int> open;
  int first_deg = 1 + static_cast<int>(rs.uniform01() * 3);
  std::vector<int> eids;
  std::size_t ksize = 1;
  for (int i = 0; i < first_deg; ++i) {
    int e = g.add_edge("e" + std::to_string(g.num_edges()), rand_card());
    eids.push_back(e);
    ksize *= g.card(e);
    open.push_back(e);
  }
  g.add_factor("f0", eids, rand_kernel(ksize));

  while (g.num_edges() < max_edges && !open.empty()) {
    int pick = static_cast<int>(rs.uniform01() * open.size());
    int anchor = open[pick];
    open.erase(open.begin() + pick);

    bool equality = rs.uniform01() < 0.25;
    if (equality) {
      int c = g.card(anchor);
      int e1 = g.add_edge("e" + std::to_string(g.num_edges()), c);
      int e2 = g.add_edge("e" + std::to_string(g.num_edges()), c);
      g.add_equality("eq" + std::to_string(g.num_nodes()), {anchor, e1, e2});
      open.push_back(e1);
      open.push_back(e2);
    } else {
      int extra = static_cast<int>(rs.uniform01() * 3);
      std::vector<int> ids{anchor};
      std::size_t n = g.card(anchor);
      for (int i = 0; i < extra && g.num_edges() < max_edges; ++i) {
        int e = g.add_edge("e" + std::to_string(g.num_edges()), rand_card());
        ids.push_back(e);
        n *= g.card(e);
        open.push_back(e);
      }
      g.add_factor("f" + std::to_string(g.num_nodes()), ids, rand_kernel(n));
    }
  }
  return g;
}

/// The seven-variable, six-factor example topology with one equality node
/// (the variable shared by three factors), filled with positive random
/// kernels.
inline nfg::Graph example_topology(uint64_t seed) {
  nfg::Graph g;
  int x1 = g.add_edge("x1", 2), x2 = g.add_edge("x2", 2), x3 = g.add_edge("x3", 2);
  int x4 = g.add_edge("x4", 2);
  int x5b = g.add_edge("x5_b", 2), x5e = g.add_edge("x5_e", 2), x5f = g.add_edge("x5_f", 2);
  int x6 = g.add_edge("x6", 2), x7 = g.add_edge("x7", 2);
  rng::Stream rs(seed, 0xF16, 0);
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
  return g;
}

/// Monte Carlo sampler of the analytic H1 test-statistic law: one Nakagami
/// envelope of signal energy plus N+1 complex noise samples. This is the
/// construction whose density is exactly the 1F1/Phi2 form.
inline double mc_pd_literal(double m, double rho, int n_samples, double sw2, double tau,
                            long trials, uint64_t seed) {
  double sz2 = rho * sw2 / m;
  long hits = 0;
  for (long i = 0; i < trials; ++i) {
    rng::Stream s(seed, 0xBEEF, static_cast<uint64_t>(i));
    double h = std::sqrt(s.gamma(m, 2.0 * sz2));
    double g0 = s.normal(), g1 = s.normal();
    double t = (h + std::sqrt(sw2) * g0) * (h + std::sqrt(sw2) * g0) +
               sw2 * g1 * g1 + 2.0 * sw2 * s.gamma(static_cast<double>(n_samples), 1.0);
    if (t > tau) ++hits;
  }
  return static_cast<double>(hits) / trials;
}

}  // namespace oracle
}  // namespace ccss

#endif  // CCSS_ORACLE_HPP_
