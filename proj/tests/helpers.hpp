#pragma once

// Shared fixtures and brute-force oracles. Nothing here calls into the code
// under test except for graph construction.

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "lincom/cover.hpp"
#include "lincom/graph.hpp"

namespace testing_support {

using lincom::Cover;
using lincom::Graph;
using lincom::NodeId;
using lincom::Weight;
using lincom::WeightedEdge;

inline std::string data_path(const std::string& name) { return std::string(LINCOM_DATA_DIR) + "/" + name; }

inline Graph load_data(const std::string& name,
                       lincom::IdOrder order = lincom::IdOrder::Numeric) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return lincom::load_edge_list(in, order).graph;
}

inline Graph load_walkthrough() { return load_data("walkthrough.txt", lincom::IdOrder::FirstAppearance); }

/// Erdos-Renyi style graph on n nodes with edge probability p.
inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<WeightedEdge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(rng)) e.push_back({u, v, 1});
  return Graph::from_edges(n, e);
}

/// Weighted graph with random self-loops, as produced by a reduction.
inline Graph random_weighted_graph(std::mt19937_64& rng, std::size_t n, double p, Weight max_w) {
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<Weight> w(1, max_w);
  std::vector<WeightedEdge> e;
  for (NodeId u = 0; u < n; ++u) {
    if (coin(rng)) e.push_back({u, u, w(rng)});
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(rng)) e.push_back({u, v, w(rng)});
  }
  return Graph::from_edges(n, e);
}

inline Cover random_cover(std::mt19937_64& rng, std::size_t n, std::size_t max_k) {
  std::uniform_int_distribution<lincom::Label> pick(0, static_cast<lincom::Label>(max_k) - 1);
  std::vector<lincom::Label> l(n);
  for (auto& x : l) x = pick(rng);
  return Cover(std::move(l));
}

/// Dense adjacency matrix; diagonal holds the (doubled) self-loop weight.
inline std::vector<std::vector<Weight>> adjacency(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<Weight>> a(n, std::vector<Weight>(n, 0));
  for (NodeId v = 0; v < n; ++v) {
    a[v][v] = g.self_loop_weight(v);
    for (const auto& nb : g.neighbors(v)) a[v][nb.id] = nb.weight;
  }
  return a;
}

/// Q = (1/S) sum_ij [A_ij - k_i k_j / S] delta(c_i, c_j), straight from the
/// matrix. S = sum_ij A_ij.
inline double modularity_oracle(const Graph& g, const std::vector<lincom::Label>& c) {
  const auto a = adjacency(g);
  const std::size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += static_cast<double>(a[i][j]);
      s += static_cast<double>(a[i][j]);
    }
  if (s == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[i] == c[j]) q += static_cast<double>(a[i][j]) - k[i] * k[j] / s;
  return q / s;
}

/// Exact conductance as a rational cut / min(vol, rest); den = 0 means 0.
struct Ratio {
  Weight num;
  Weight den;
};

inline Ratio conductance_ratio(const Graph& g, const std::vector<char>& in) {
  Weight cut = 0, vol = 0, total = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    total += g.strength(v);
    if (!in[v]) continue;
    vol += g.strength(v);
    for (const auto& nb : g.neighbors(v))
      if (!in[nb.id]) cut += nb.weight;
  }
  const Weight den = std::min(vol, total - vol);
  if (den == 0) return {0, 1};
  return {cut, den};
}

inline bool less_than(Ratio a, Ratio b) { return a.num * b.den < b.num * a.den; }

}  // namespace testing_support
