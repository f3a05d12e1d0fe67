#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "lincom/cover.hpp"
#include "lincom/graph.hpp"
#include "lincom/refine.hpp"

namespace lincom {

/// Asynchronous label propagation. Each pass visits nodes in a freshly
/// shuffled order and every node takes the most frequent label among its
/// neighbors, the smallest such label on ties.
inline Cover label_propagation(const Graph& g, std::uint64_t seed, std::size_t max_iters) {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  const std::size_t n = g.node_count();
  std::vector<NodeId> label(n);
  std::iota(label.begin(), label.end(), NodeId{0});
  std::vector<NodeId> order(label);
  std::vector<std::size_t> count(n, 0);
  std::vector<NodeId> touched;
  std::mt19937_64 rng(seed);

  for (std::size_t it = 0; it < max_iters; ++it) {
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (NodeId v : order) {
      const auto nbs = g.neighbors(v);
      if (nbs.empty()) continue;
      touched.clear();
      std::size_t top = 0;
      for (const auto& nb : nbs) {
        const NodeId l = label[nb.id];
        if (count[l]++ == 0) touched.push_back(l);
        top = std::max(top, count[l]);
      }
      auto pick = static_cast<NodeId>(n);
      for (NodeId l : touched) {
        if (count[l] == top) pick = std::min(pick, l);
      }
      for (NodeId l : touched) count[l] = 0;
      if (pick != label[v]) {
        label[v] = pick;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return finalize(Cover(std::vector<Label>(label.begin(), label.end())));
}

/// Multilevel modularity maximization from the all-singletons cover.
inline Cover louvain_baseline(const Graph& g) {
  return finalize(mod_maximize(reduce(g, Cover::singletons(g.node_count()))));
}

}  // namespace lincom
