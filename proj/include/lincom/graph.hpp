#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lincom {

using NodeId = std::uint32_t;
using Weight = std::int64_t;

struct Neighbor {
  NodeId id;
  Weight weight;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct WeightedEdge {
  NodeId u;
  NodeId v;
  Weight weight = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Immutable undirected graph in compressed adjacency form.
///
/// Each undirected edge {u,v} is stored in both rows. Rows are sorted by
/// neighbor id and carry no duplicates. Self-loops never appear in the rows;
/// reduced graphs keep them in a separate per-node weight (already doubled,
/// i.e. the diagonal entry of the adjacency matrix).
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds from an edge list over ids [0, n). Parallel edges are merged by
  /// summing weights; edges with u == v are added to the node's self-loop
  /// weight as 2*w (one undirected loop contributes twice to the strength).
  static Graph from_edges(std::size_t n, std::span<const WeightedEdge> edges,
                          std::vector<std::string> labels = {}) {
    Graph g;
    g.self_loop_.assign(n, 0);
    std::vector<std::pair<NodeId, Neighbor>> half;
    half.reserve(edges.size() * 2);
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint out of range");
      if (e.weight < 0) throw std::invalid_argument("negative edge weight");
      if (e.u == e.v) {
        g.self_loop_[e.u] += 2 * e.weight;
        continue;
      }
      half.push_back({e.u, {e.v, e.weight}});
      half.push_back({e.v, {e.u, e.weight}});
    }
    std::sort(half.begin(), half.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second.id < b.second.id;
    });

    g.offsets_.assign(n + 1, 0);
    g.adjacency_.reserve(half.size());
    for (std::size_t i = 0; i < half.size();) {
      auto [row, nb] = half[i];
      std::size_t j = i + 1;
      while (j < half.size() && half[j].first == row && half[j].second.id == nb.id) {
        nb.weight += half[j].second.weight;
        ++j;
      }
      g.adjacency_.push_back(nb);
      ++g.offsets_[row + 1];
      i = j;
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

    g.edge_count_ = g.adjacency_.size() / 2;
    g.strength_.assign(n, 0);
    g.total_strength_ = 0;
    for (NodeId v = 0; v < n; ++v) {
      Weight s = g.self_loop_[v];
      for (const auto& nb : g.neighbors(v)) s += nb.weight;
      g.strength_[v] = s;
      g.total_strength_ += s;
    }

    if (labels.empty()) {
      labels.reserve(n);
      for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    if (labels.size() != n) throw std::invalid_argument("label count does not match node count");
    g.labels_ = std::move(labels);
    g.index_.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
      if (!g.index_.emplace(g.labels_[v], v).second) {
        throw std::invalid_argument("duplicate node label: " + g.labels_[v]);
      }
    }
    return g;
  }

  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  /// Number of distinct undirected non-loop edges.
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const Neighbor> neighbors(NodeId v) const {
    check(v);
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::size_t degree(NodeId v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }

  Weight self_loop_weight(NodeId v) const {
    check(v);
    return self_loop_[v];
  }

  /// Weighted degree including the self-loop entry. Equals degree() on input graphs.
  Weight strength(NodeId v) const {
    check(v);
    return strength_[v];
  }

  /// Sum of all strengths; 2m for unweighted input graphs.
  Weight total_strength() const noexcept { return total_strength_; }

  bool is_unweighted() const noexcept {
    return std::all_of(self_loop_.begin(), self_loop_.end(), [](Weight w) { return w == 0; }) &&
           std::all_of(adjacency_.begin(), adjacency_.end(),
                       [](const Neighbor& nb) { return nb.weight == 1; });
  }

  const std::string& label(NodeId v) const {
    check(v);
    return labels_[v];
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Each undirected non-loop edge once, with u < v, in row order.
  std::vector<WeightedEdge> edges() const {
    std::vector<WeightedEdge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u) {
      for (const auto& nb : neighbors(u)) {
        if (u < nb.id) out.push_back({u, nb.id, nb.weight});
      }
    }
    return out;
  }

 private:
  void check(NodeId v) const {
    if (v >= node_count()) {
      throw std::out_of_range("node id " + std::to_string(v) + " out of range [0, " +
                              std::to_string(node_count()) + ")");
    }
  }

  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<Weight> self_loop_;
  std::vector<Weight> strength_;
  Weight total_strength_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

struct LoadReport {
  std::size_t lines = 0;
  std::size_t edge_lines = 0;
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

struct LoadedGraph {
  Graph graph;
  LoadReport report;
};

enum class IdOrder {
  FirstAppearance,
  /// Ascending numeric label value; requires every label to be an integer.
  Numeric,
};

/// Reads a SNAP-style edge list: one edge per line, two whitespace-separated
/// labels, '#' comment lines. Blank lines are skipped. Labels get dense ids in
/// order of first appearance (or numeric order, on request); duplicates and
/// self-loops are dropped.
inline LoadedGraph load_edge_list(std::istream& in, IdOrder order = IdOrder::FirstAppearance) {
  LoadReport report;
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::pair<NodeId, NodeId>> pairs;

  auto intern = [&](std::string&& s) {
    auto [it, inserted] = ids.try_emplace(s, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(std::move(s));
    return it->second;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++report.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream tokens(line);
    std::string a, b, extra;
    if (!(tokens >> a >> b) || (tokens >> extra)) {
      throw ParseError(report.lines, "expected two node labels, got '" + line + "'");
    }
    ++report.edge_lines;
    NodeId u = intern(std::move(a));
    NodeId v = intern(std::move(b));
    if (u == v) {
      ++report.self_loops;
      continue;
    }
    pairs.emplace_back(std::min(u, v), std::max(u, v));
  }

  if (order == IdOrder::Numeric) {
    std::vector<std::pair<long long, NodeId>> keyed;
    keyed.reserve(labels.size());
    for (NodeId v = 0; v < labels.size(); ++v) {
      std::size_t used = 0;
      long long value = 0;
      try {
        value = std::stoll(labels[v], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != labels[v].size()) {
        throw std::invalid_argument("numeric id order needs integer labels, got '" + labels[v] + "'");
      }
      keyed.emplace_back(value, v);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<NodeId> remap(labels.size());
    std::vector<std::string> sorted_labels;
    sorted_labels.reserve(labels.size());
    for (NodeId i = 0; i < keyed.size(); ++i) {
      remap[keyed[i].second] = i;
      sorted_labels.push_back(std::move(labels[keyed[i].second]));
    }
    labels = std::move(sorted_labels);
    for (auto& [u, v] : pairs) {
      u = remap[u];
      v = remap[v];
      if (u > v) std::swap(u, v);
    }
  }

  std::sort(pairs.begin(), pairs.end());
  auto last = std::unique(pairs.begin(), pairs.end());
  report.duplicate_edges = static_cast<std::size_t>(pairs.end() - last);
  pairs.erase(last, pairs.end());

  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back({u, v, 1});
  const std::size_t n = labels.size();
  return {Graph::from_edges(n, edges, std::move(labels)), report};
}

inline LoadedGraph load_edge_list(std::string_view text,
                                  IdOrder order = IdOrder::FirstAppearance) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in, order);
}

/// Writes the edges as "label<TAB>label" lines. Isolated nodes are not
/// representable in this format and are lost.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& e : g.edges()) out << g.label(e.u) << '\t' << g.label(e.v) << '\n';
}

/// Keeps floor(fraction * m) edges drawn uniformly without replacement.
/// Node set and labels are unchanged, so sampled-out nodes stay as isolated.
inline Graph sample_edges(const Graph& g, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("sample fraction must lie in (0, 1]");
  }
  auto all = g.edges();
  const auto keep = static_cast<std::size_t>(fraction * static_cast<double>(all.size()));
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates; the first `keep` slots are the sample
  for (std::size_t i = 0; i < keep; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(keep);
  return Graph::from_edges(g.node_count(), all, g.labels());
}

/// Maximal connected node sets, each sorted, ordered by smallest member.
inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    auto& comp = out.emplace_back();
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto& nb : g.neighbors(v)) {
        if (!seen[nb.id]) {
          seen[nb.id] = 1;
          stack.push_back(nb.id);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
  }
  return out;
}

}  // namespace lincom
