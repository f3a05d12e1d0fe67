#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "lincom/cover.hpp"
#include "lincom/graph.hpp"

namespace lincom {

/// Newman modularity for a complete cover. Works on weighted graphs with
/// self-loops: the self-loop entry counts fully toward both the community's
/// internal weight and the node strength, so a reduced graph under its
/// singleton partition scores exactly like the cover it was reduced from.
inline double modularity(const Graph& g, const Cover& cover) {
  if (cover.size() != g.node_count()) throw std::invalid_argument("cover size mismatch");
  if (!cover.complete()) throw std::invalid_argument("modularity needs every node assigned");
  const Weight total = g.total_strength();
  if (total == 0) return 0.0;

  std::unordered_map<Label, std::size_t> slot;
  std::vector<Weight> inner;
  std::vector<Weight> tot;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto [it, fresh] = slot.try_emplace(cover.label(v), inner.size());
    if (fresh) {
      inner.push_back(0);
      tot.push_back(0);
    }
    const std::size_t c = it->second;
    tot[c] += g.strength(v);
    inner[c] += g.self_loop_weight(v);
    for (const auto& nb : g.neighbors(v)) {
      if (cover.label(nb.id) == cover.label(v)) inner[c] += nb.weight;
    }
  }

  const double s = static_cast<double>(total);
  double q = 0.0;
  for (std::size_t c = 0; c < inner.size(); ++c) {
    const double frac = static_cast<double>(tot[c]) / s;
    q += static_cast<double>(inner[c]) / s - frac * frac;
  }
  return q;
}

/// Conductance by direct enumeration of the member set's edges.
/// cut / min(vol(S), vol(V \ S)); 0 when the smaller volume is 0.
inline double conductance_oracle(const Graph& g, std::span<const NodeId> members) {
  std::vector<char> in(g.node_count(), 0);
  for (NodeId v : members) in.at(v) = 1;
  Weight cut = 0;
  Weight vol = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!in[v]) continue;
    vol += g.strength(v);
    for (const auto& nb : g.neighbors(v)) {
      if (!in[nb.id]) cut += nb.weight;
    }
  }
  const Weight rest = g.total_strength() - vol;
  const Weight denom = std::min(vol, rest);
  if (denom == 0) return 0.0;
  return static_cast<double>(cut) / static_cast<double>(denom);
}

struct CoverStats {
  std::size_t community_count = 0;
  std::map<std::size_t, std::size_t> size_histogram;  // size -> number of communities
  std::size_t min_size = 0;
  std::size_t max_size = 0;
  double mean_size = 0.0;
  double modularity = 0.0;
  std::vector<Label> labels;          // community labels, ascending
  std::vector<std::size_t> sizes;     // parallel to labels
  std::vector<double> conductances;   // parallel to labels
};

inline CoverStats cover_stats(const Graph& g, const Cover& cover) {
  CoverStats st;
  st.modularity = modularity(g, cover);
  const auto comms = cover.communities();
  st.community_count = comms.size();
  if (comms.empty()) return st;
  st.min_size = g.node_count();
  for (const auto& [label, members] : comms) {
    const std::size_t sz = members.size();
    st.labels.push_back(label);
    st.sizes.push_back(sz);
    st.conductances.push_back(conductance_oracle(g, members));
    ++st.size_histogram[sz];
    st.min_size = std::min(st.min_size, sz);
    st.max_size = std::max(st.max_size, sz);
  }
  st.mean_size = static_cast<double>(g.node_count()) / static_cast<double>(st.community_count);
  return st;
}

}  // namespace lincom
