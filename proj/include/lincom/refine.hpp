#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lincom/cover.hpp"
#include "lincom/graph.hpp"
#include "lincom/traversal.hpp"

namespace lincom {

/// Places brokers into the community with the highest belonging probability
/// |N(v) ∩ C| / |C|, evaluated against the traversal's cover.
///
/// Only communities that contain at least one community node take part. A
/// broker that seeded such a community keeps it. Ties for the maximum, or no
/// neighbor in any such community, leave the broker unassigned.
inline Cover post_process(const Graph& g, const Cover& initial, std::span<const NodeState> states) {
  const std::size_t n = g.node_count();
  if (initial.size() != n || states.size() != n) throw std::invalid_argument("size mismatch");

  // Traversal labels are seed node ids, so dense arrays indexed by label work.
  std::vector<std::size_t> size(n, 0);
  std::vector<char> live(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    const Label l = initial.label(v);
    if (l < 0 || static_cast<std::size_t>(l) >= n) {
      throw std::invalid_argument("traversal cover labels must be node ids");
    }
    ++size[l];
    if (states[v].type == NodeType::Community) live[l] = 1;
  }

  Cover out = initial;
  std::vector<std::size_t> hits(n, 0);
  std::vector<NodeId> touched;
  for (NodeId v = 0; v < n; ++v) {
    if (states[v].type != NodeType::Broker) continue;
    const auto own = static_cast<NodeId>(initial.label(v));
    if (live[own]) continue;

    touched.clear();
    for (const auto& nb : g.neighbors(v)) {
      const auto l = static_cast<NodeId>(initial.label(nb.id));
      if (!live[l]) continue;
      if (hits[l]++ == 0) touched.push_back(l);
    }

    NodeId best = 0;
    std::size_t best_hits = 0;
    std::size_t best_size = 1;
    bool tie = false;
    for (NodeId l : touched) {
      // hits/size vs best_hits/best_size without division
      const auto lhs = hits[l] * best_size;
      const auto rhs = best_hits * size[l];
      if (best_hits == 0 || lhs > rhs) {
        best = l;
        best_hits = hits[l];
        best_size = size[l];
        tie = false;
      } else if (lhs == rhs) {
        tie = true;
      }
    }
    for (NodeId l : touched) hits[l] = 0;

    if (best_hits == 0 || tie) {
      out.unassign(v);
    } else {
      out.assign(v, best);
    }
  }
  return out;
}

/// Community graph: one super-vertex per community. Super-vertex ids follow
/// each community's smallest member id.
struct ReducedGraph {
  Graph graph;
  std::vector<Label> label_map;   // super-vertex -> community label
  std::vector<NodeId> membership; // original node -> super-vertex
};

/// Contracts each community to a super-vertex. Intra-community weight goes to
/// the self-loop entry (2x the internal edge weight plus any existing loops),
/// inter-community weight is summed onto the cross edge.
inline ReducedGraph reduce(const Graph& g, const Cover& cover) {
  const std::size_t n = g.node_count();
  if (cover.size() != n) throw std::invalid_argument("cover size mismatch");
  const Cover full = cover.with_singletons();

  ReducedGraph rg;
  rg.membership.resize(n);
  std::unordered_map<Label, NodeId> super;
  for (NodeId v = 0; v < n; ++v) {
    auto [it, fresh] = super.try_emplace(full.label(v), static_cast<NodeId>(rg.label_map.size()));
    if (fresh) rg.label_map.push_back(full.label(v));
    rg.membership[v] = it->second;
  }

  std::vector<WeightedEdge> edges;
  edges.reserve(g.edge_count() + n);
  for (NodeId v = 0; v < n; ++v) {
    if (g.self_loop_weight(v) != 0) {
      // stored doubled; from_edges doubles loops again
      edges.push_back({rg.membership[v], rg.membership[v], g.self_loop_weight(v) / 2});
    }
    for (const auto& nb : g.neighbors(v)) {
      if (v < nb.id) edges.push_back({rg.membership[v], rg.membership[nb.id], nb.weight});
    }
  }
  std::vector<std::string> names;
  names.reserve(rg.label_map.size());
  for (Label l : rg.label_map) names.push_back(std::to_string(l));
  rg.graph = Graph::from_edges(rg.label_map.size(), edges, std::move(names));
  return rg;
}

/// Working partition for local moving: community id per vertex plus the
/// strength total of each community.
struct Partition {
  explicit Partition(const Graph& g) : community(g.node_count()), total(g.node_count()) {
    std::iota(community.begin(), community.end(), NodeId{0});
    for (NodeId v = 0; v < g.node_count(); ++v) total[v] = g.strength(v);
  }

  /// Starts from `seed`; unassigned nodes become singletons.
  Partition(const Graph& g, const Cover& seed) : Partition(g) {
    if (seed.size() != g.node_count()) throw std::invalid_argument("cover size mismatch");
    const Cover dense = finalize(seed);
    for (NodeId v = 0; v < g.node_count(); ++v) move(g, v, static_cast<NodeId>(dense.label(v)));
  }

  void move(const Graph& g, NodeId v, NodeId to) {
    total[community[v]] -= g.strength(v);
    total[to] += g.strength(v);
    community[v] = to;
  }

  std::vector<NodeId> community;
  std::vector<Weight> total;
};

inline constexpr double kMoveTolerance = 1e-12;

namespace detail {

/// Modularity change of moving v (strength k_v) from A to B, where k_vA/k_vB
/// are v's edge weights into A \ {v} and B, and tot_A includes v.
inline double move_gain(Weight k_vA, Weight k_vB, Weight k_v, Weight tot_A, Weight tot_B,
                        Weight total) {
  if (total == 0) return 0.0;
  const double s = static_cast<double>(total);
  return 2.0 * static_cast<double>(k_vB - k_vA) / s -
         2.0 * static_cast<double>(k_v) * static_cast<double>(tot_B - tot_A + k_v) / (s * s);
}

}  // namespace detail

/// Q(v moved to `target`) - Q(current) under weighted Newman modularity.
inline double delta_modularity(const Graph& g, NodeId v, NodeId target, const Partition& p) {
  const NodeId from = p.community.at(v);
  if (target == from) return 0.0;
  Weight k_vA = 0;
  Weight k_vB = 0;
  for (const auto& nb : g.neighbors(v)) {
    if (p.community[nb.id] == from) k_vA += nb.weight;
    if (p.community[nb.id] == target) k_vB += nb.weight;
  }
  return detail::move_gain(k_vA, k_vB, g.strength(v), p.total[from], p.total.at(target),
                           g.total_strength());
}

/// Repeated ascending-id sweeps; each vertex moves to the neighboring
/// community with the largest gain above tolerance (ties: smallest id).
/// Returns true if any vertex moved.
inline bool local_moving(const Graph& g, Partition& p) {
  const std::size_t n = g.node_count();
  std::vector<Weight> w_to(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<NodeId> touched;
  bool moved_any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (NodeId v = 0; v < n; ++v) {
      const NodeId from = p.community[v];
      touched.clear();
      for (const auto& nb : g.neighbors(v)) {
        const NodeId c = p.community[nb.id];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        w_to[c] += nb.weight;
      }
      const Weight k_vA = seen[from] ? w_to[from] : 0;
      NodeId best = from;
      double best_gain = kMoveTolerance;
      for (NodeId c : touched) {
        if (c == from) continue;
        const double gain = detail::move_gain(k_vA, w_to[c], g.strength(v), p.total[from],
                                              p.total[c], g.total_strength());
        if (gain > best_gain || (gain == best_gain && best != from && c < best)) {
          best = c;
          best_gain = gain;
        }
      }
      for (NodeId c : touched) {
        w_to[c] = 0;
        seen[c] = 0;
      }
      if (best != from) {
        p.move(g, v, best);
        moved = true;
        moved_any = true;
      }
    }
  }
  return moved_any;
}

/// Multilevel greedy modularity maximization starting from the reduced
/// graph's singleton partition. Returns a cover over the original nodes,
/// labeled by top-level super-vertex id.
inline Cover mod_maximize(const ReducedGraph& rg) {
  std::vector<NodeId> owner = rg.membership;  // original node -> current-level vertex
  Graph level = rg.graph;
  for (;;) {
    Partition p(level);
    if (!local_moving(level, p)) break;
    std::vector<Label> l(p.community.begin(), p.community.end());
    ReducedGraph next = reduce(level, Cover(std::move(l)));
    for (auto& o : owner) o = next.membership[o];
    level = std::move(next.graph);
  }
  std::vector<Label> out(owner.begin(), owner.end());
  return Cover(std::move(out));
}

/// Modularity refinement of a traversal cover. Individual nodes may first
/// leave their initial cluster (local moving on g, seeded with the cover);
/// the converged partition is then contracted and handed to mod_maximize.
/// With no profitable node move this gives the partition of
/// mod_maximize(reduce(g, cover)).
inline Cover refine(const Graph& g, const Cover& cover) {
  Partition p(g, cover);
  local_moving(g, p);
  const ReducedGraph rg = reduce(g, Cover(std::vector<Label>(p.community.begin(), p.community.end())));
  return mod_maximize(rg);
}

}  // namespace lincom
