// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
//
// Normal (Forney-style) factor graphs over discrete domains with single-sweep
// sum-product message passing, plus the message-count cost model.
// Variables are edges; factors are nodes; an edge attaches to at most two
// nodes and a half-edge to exactly one.
#ifndef CCSS_NFG_HPP_
#define CCSS_NFG_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccss {
namespace nfg {

using Table = std::vector<double>;  // row-major over the node's edges, in order

struct Edge {
  std::string name;
  int cardinality = 2;
  std::vector<int> nodes;  // attached node ids, size 1 (half-edge) or 2
};

struct Node {
  std::string name;
  bool is_equality = false;
  std::vector<int> edges;  // attached edge ids, in kernel index order
  Table kernel;            // empty for equality nodes
};

/// Directed message along an edge; payload normalized to sum 1.
struct Message {
  int edge = -1;
  int from_node = -1;  // -1 means the half-edge unit initialization
  int to_node = -1;
  std::vector<double> payload;
};

class Graph {
 public:
  int add_edge(const std::string& name, int cardinality) {
    if (cardinality < 1) throw std::domain_error("nfg: cardinality >= 1");
    edges_.push_back({name, cardinality, {}});
    return static_cast<int>(edges_.size()) - 1;
  }

  /// Attaches a factor node; `kernel` is indexed row-major over `edge_ids`
  /// (last edge fastest).
  int add_factor(const std::string& name, const std::vector<int>& edge_ids,
                 Table kernel) {
    std::size_t want = 1;
    for (int e : edge_ids) want *= card(e);
    if (kernel.size() != want)
      throw std::invalid_argument("nfg: kernel size mismatch for " + name);
    return attach(Node{name, false, edge_ids, std::move(kernel)});
  }

  /// Equality node: all attached edges share one domain and must agree.
  int add_equality(const std::string& name, const std::vector<int>& edge_ids) {
    if (edge_ids.size() < 2) throw std::invalid_argument("nfg: equality degree >= 2");
    int c = card(edge_ids[0]);
    for (int e : edge_ids)
      if (card(e) != c) throw std::invalid_argument("nfg: equality domains differ");
    return attach(Node{name, true, edge_ids, {}});
  }

  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const Node& node(int n) const { return nodes_.at(n); }
  int card(int e) const { return edges_.at(e).cardinality; }

  /// Degree census d_i = number of nodes with degree i (1-indexed map).
  std::map<int, int> degree_census() const {
    std::map<int, int> census;
    for (const auto& n : nodes_) census[static_cast<int>(n.edges.size())]++;
    return census;
  }

  void validate() const {
    for (const auto& e : edges_) {
      if (e.nodes.empty() || e.nodes.size() > 2)
        throw std::logic_error("nfg: edge " + e.name + " must attach to 1 or 2 nodes");
    }
  }

 private:
  int attach(Node n) {
    int id = static_cast<int>(nodes_.size());
    for (int e : n.edges) {
      if (edges_.at(e).nodes.size() >= 2)
        throw std::invalid_argument("nfg: edge " + edges_[e].name +
                                    " already has two nodes; insert an equality node");
      edges_[e].nodes.push_back(id);
    }
    nodes_.push_back(std::move(n));
    return id;
  }

  std::vector<Edge> edges_;
  std::vector<Node> nodes_;
};

/// Result of one sum-product sweep.
struct SpaResult {
  std::vector<std::vector<double>> beliefs;  // per edge, normalized
  std::vector<Message> messages;             // every message, computed once
  long messages_computed = 0;
};

namespace detail {

inline void normalize(std::vector<double>& v) {
  double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s <= 0.0) throw std::runtime_error("nfg: message normalizes to zero");
  for (double& x : v) x /= s;
}

// Message from `node` toward `edge`: marginalize the kernel against the
// incoming messages on every other edge.
inline std::vector<double> node_to_edge(const Graph& g, const Node& node, int out_edge,
                                        const std::vector<const std::vector<double>*>& in) {
  const auto& eids = node.edges;
  const int deg = static_cast<int>(eids.size());
  int out_pos = -1;
  for (int i = 0; i < deg; ++i)
    if (eids[i] == out_edge) out_pos = i;
  if (out_pos < 0) throw std::logic_error("nfg: node/edge mismatch");

  if (node.is_equality) {
    std::vector<double> out(g.card(out_edge), 1.0);
    for (int i = 0; i < deg; ++i) {
      if (i == out_pos) continue;
      const auto& m = *in[i];
      for (std::size_t v = 0; v < out.size(); ++v) out[v] *= m[v];
    }
    normalize(out);
    return out;
  }

  std::vector<int> dims(deg);
  for (int i = 0; i < deg; ++i) dims[i] = g.card(eids[i]);
  std::vector<double> out(dims[out_pos], 0.0);
  std::vector<int> idx(deg, 0);
  const Table& k = node.kernel;
  for (std::size_t flat = 0; flat < k.size(); ++flat) {
    // decode row-major index (last edge fastest)
    std::size_t rem = flat;
    for (int i = deg - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % dims[i]);
      rem /= dims[i];
    }
    double w = k[flat];
    if (w == 0.0) continue;
    for (int i = 0; i < deg; ++i) {
      if (i == out_pos) continue;
      w *= (*in[i])[idx[i]];
    }
    out[idx[out_pos]] += w;
  }
  normalize(out);
  return out;
}

}  // namespace detail

/// Single natural-schedule sweep: every directed message computed exactly
/// once, from half-edges and leaf nodes inward and back out. Throws if the
/// graph has a cycle (loopy propagation is out of scope).
///
/// Message slots per edge: slot i carries the message INTO edge.nodes[i].
/// A half-edge has a second, outward slot holding its node's emission, and
/// its inbound slot is the unit initialization.
inline SpaResult run_spa(const Graph& g) {
  g.validate();
  const int ne = g.num_edges();
  const int nn = g.num_nodes();

  std::vector<std::vector<std::vector<double>>> inbound(ne);  // [edge][slot]
  std::vector<std::vector<bool>> have(ne);
  std::vector<std::vector<double>> outward(ne);  // half-edges only
  std::vector<bool> have_outward(ne, false);

  SpaResult result;
  std::vector<int> missing(nn, 0);
  std::vector<std::vector<bool>> emitted(nn);
  for (int n = 0; n < nn; ++n) {
    missing[n] = static_cast<int>(g.node(n).edges.size());
    emitted[n].assign(g.node(n).edges.size(), false);
  }
  for (int e = 0; e < ne; ++e) {
    const auto& ed = g.edge(e);
    inbound[e].resize(ed.nodes.size());
    have[e].assign(ed.nodes.size(), false);
    if (ed.nodes.size() == 1) {
      // half-edge: unit message into its only node
      inbound[e][0].assign(ed.cardinality, 1.0 / ed.cardinality);
      have[e][0] = true;
      missing[ed.nodes[0]]--;
      result.messages.push_back({e, -1, ed.nodes[0], inbound[e][0]});
    }
  }

  auto inputs_for = [&](int n) {
    const auto& eids = g.node(n).edges;
    std::vector<const std::vector<double>*> in(eids.size(), nullptr);
    for (std::size_t i = 0; i < eids.size(); ++i) {
      int e = eids[i];
      for (std::size_t s = 0; s < g.edge(e).nodes.size(); ++s)
        if (g.edge(e).nodes[s] == n && have[e][s]) in[i] = &inbound[e][s];
    }
    return in;
  };

  std::vector<int> work;
  for (int n = 0; n < nn; ++n) work.push_back(n);

  while (!work.empty()) {
    int n = work.back();
    work.pop_back();
    const auto& eids = g.node(n).edges;
    if (missing[n] > 1) continue;
    auto in = inputs_for(n);
    for (std::size_t i = 0; i < eids.size(); ++i) {
      int e = eids[i];
      if (emitted[n][i]) continue;
      // can emit on e when every *other* edge has its inbound present
      bool ready = true;
      for (std::size_t j = 0; j < eids.size(); ++j)
        if (j != i && in[j] == nullptr) ready = false;
      if (!ready) continue;
      auto payload = detail::node_to_edge(g, g.node(n), e, in);
      emitted[n][i] = true;
      ++result.messages_computed;
      const auto& ed = g.edge(e);
      if (ed.nodes.size() == 2) {
        int other = (ed.nodes[0] == n) ? 1 : 0;
        int target = ed.nodes[other];
        if (!have[e][other]) {
          inbound[e][other] = payload;
          have[e][other] = true;
          missing[target]--;
          work.push_back(target);
        }
        result.messages.push_back({e, n, target, std::move(payload)});
      } else {
        outward[e] = payload;
        have_outward[e] = true;
        result.messages.push_back({e, n, -1, std::move(payload)});
      }
    }
  }

  // audit: every slot exactly once, else the graph is cyclic
  for (int e = 0; e < ne; ++e) {
    const auto& ed = g.edge(e);
    for (std::size_t s = 0; s < ed.nodes.size(); ++s)
      if (!have[e][s])
        throw std::runtime_error("nfg: cycle detected (schedule stalled at edge " +
                                 ed.name + ")");
    if (ed.nodes.size() == 1 && !have_outward[e])
      throw std::runtime_error("nfg: cycle detected (no outward message on " +
                               ed.name + ")");
  }

  result.beliefs.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& ed = g.edge(e);
    if (ed.nodes.size() == 2) {
      std::vector<double> b(ed.cardinality);
      for (int v = 0; v < ed.cardinality; ++v)
        b[v] = inbound[e][0][v] * inbound[e][1][v];
      detail::normalize(b);
      result.beliefs[e] = std::move(b);
    } else {
      result.beliefs[e] = outward[e];  // unit init times the node's emission
    }
  }
  return result;
}

/// Exact partition function of an acyclic graph: unnormalized elimination
/// toward node 0. Used to read likelihoods off conditioned graphs.
inline double tree_partition_function(const Graph& g) {
  g.validate();
  // message up from `node` toward its parent edge, unnormalized
  struct Ctx {
    const Graph& g;
    std::vector<double> up_edge(int e, int from_node) {  // into from_node along e
      const auto& ed = g.edge(e);
      if (ed.nodes.size() == 1) return std::vector<double>(ed.cardinality, 1.0);
      int child = (ed.nodes[0] == from_node) ? ed.nodes[1] : ed.nodes[0];
      return up_node(child, e);
    }
    std::vector<double> up_node(int n, int parent_edge) {
      const auto& node = g.node(n);
      std::vector<const std::vector<double>*> in(node.edges.size(), nullptr);
      std::vector<std::vector<double>> storage(node.edges.size());
      for (std::size_t i = 0; i < node.edges.size(); ++i) {
        if (node.edges[i] == parent_edge) continue;
        storage[i] = up_edge(node.edges[i], n);
        in[i] = &storage[i];
      }
      // unnormalized node_to_edge
      const auto& eids = node.edges;
      int deg = static_cast<int>(eids.size());
      int out_pos = -1;
      for (int i = 0; i < deg; ++i)
        if (eids[i] == parent_edge) out_pos = i;
      std::vector<int> dims(deg);
      for (int i = 0; i < deg; ++i) dims[i] = g.card(eids[i]);
      std::vector<double> out(dims[out_pos], 0.0);
      if (node.is_equality) {
        for (int v = 0; v < dims[out_pos]; ++v) {
          double w = 1.0;
          for (int i = 0; i < deg; ++i)
            if (i != out_pos) w *= (*in[i])[v];
          out[v] = w;
        }
        return out;
      }
      std::vector<int> idx(deg, 0);
      for (std::size_t flat = 0; flat < node.kernel.size(); ++flat) {
        std::size_t rem = flat;
        for (int i = deg - 1; i >= 0; --i) {
          idx[i] = static_cast<int>(rem % dims[i]);
          rem /= dims[i];
        }
        double w = node.kernel[flat];
        if (w == 0.0) continue;
        for (int i = 0; i < deg; ++i)
          if (i != out_pos) w *= (*in[i])[idx[i]];
        out[idx[out_pos]] += w;
      }
      return out;
    }
  } ctx{g};

  // eliminate everything into node 0, then close over its own kernel
  const auto& root = g.node(0);
  std::vector<std::vector<double>> storage(root.edges.size());
  std::vector<const std::vector<double>*> in(root.edges.size());
  for (std::size_t i = 0; i < root.edges.size(); ++i) {
    storage[i] = ctx.up_edge(root.edges[i], 0);
    in[i] = &storage[i];
  }
  int deg = static_cast<int>(root.edges.size());
  std::vector<int> dims(deg);
  for (int i = 0; i < deg; ++i) dims[i] = g.card(root.edges[i]);
  double z = 0.0;
  if (root.is_equality) {
    for (int v = 0; v < dims[0]; ++v) {
      double w = 1.0;
      for (int i = 0; i < deg; ++i) w *= (*in[i])[v];
      z += w;
    }
    return z;
  }
  std::vector<int> idx(deg, 0);
  for (std::size_t flat = 0; flat < root.kernel.size(); ++flat) {
    std::size_t rem = flat;
    for (int i = deg - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % dims[i]);
      rem /= dims[i];
    }
    double w = root.kernel[flat];
    for (int i = 0; i < deg; ++i) w *= (*in[i])[idx[i]];
    z += w;
  }
  return z;
}

/// Message-count cost model: C_FG = sum_i i * d_i * |X|^i over the degree
/// census, one CPU cycle per message.
inline unsigned long long complexity_fg(const std::map<int, int>& census,
                                        int domain_card) {
  unsigned long long total = 0;
  for (auto [deg, count] : census) {
    unsigned long long pw = 1;
    for (int i = 0; i < deg; ++i) pw *= static_cast<unsigned long long>(domain_card);
    total += static_cast<unsigned long long>(deg) *
             static_cast<unsigned long long>(count) * pw;
  }
  return total;
}

/// Explicit-marginalization cost: M * |X|^M.
inline unsigned long long complexity_explicit(int num_vars, int domain_card) {
  unsigned long long pw = 1;
  for (int i = 0; i < num_vars; ++i) pw *= static_cast<unsigned long long>(domain_card);
  return static_cast<unsigned long long>(num_vars) * pw;
}

/// Structured-text census of a graph: node degrees and edge domains, the
/// inputs of the cost model.
inline std::string census_text(const Graph& g) {
  std::string out;
  out += "nodes " + std::to_string(g.num_nodes()) + ", edges " +
         std::to_string(g.num_edges()) + "\n";
  for (auto [deg, count] : g.degree_census())
    out += "degree " + std::to_string(deg) + ": " + std::to_string(count) + " nodes\n";
  for (int e = 0; e < g.num_edges(); ++e)
    out += "edge " + g.edge(e).name + ": |X| = " + std::to_string(g.card(e)) +
           (g.edge(e).nodes.size() == 1 ? " (half-edge)\n" : "\n");
  return out;
}

}  // namespace nfg
}  // namespace ccss

#endif  // CCSS_NFG_HPP_
