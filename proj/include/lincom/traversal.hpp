#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lincom/cover.hpp"
#include "lincom/graph.hpp"

namespace lincom {

enum class NodeType : std::uint8_t { Uncategorized = 0, Broker = 1, Community = 2 };

struct NodeState {
  NodeType type = NodeType::Uncategorized;
  bool covered = false;
  NodeId community = 0;
};

enum class Method { INS, COND };

struct RunConfig {
  Method method = Method::INS;
  double threshold = 0.75;            // INS only
  std::optional<NodeId> start;        // nullopt: lowest-degree node
  bool run_modmax = true;
  std::uint64_t seed = 0;             // sampling sweeps only

  void validate() const {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
      throw std::invalid_argument("threshold must lie in [0, 1]");
    }
  }
};

struct TraversalFrontier {
  std::vector<NodeId> broker_stack;
  std::deque<NodeId> community_queue;
  std::size_t cover_count = 0;
};

/// Where the node handed to NODE-CAT came from.
enum class Source : std::uint8_t { Start, Restart, Queue, Stack };

struct ProcessEvent {
  NodeId node;
  Source source;
  std::size_t queue_size;  // community queue length at the time of selection
};

struct Categorization {
  NodeId node;
  NodeType type;
  double score;       // INS, or conductance of the grown cluster for COND
  NodeId processed_by;
  std::size_t step;   // index into TraversalState::events
};

/// Adjacency entries read by each phase. Every counter is bounded by 2m.
struct TraversalCounters {
  std::size_t processed = 0;
  std::size_t spread_scans = 0;
  std::size_t categorize_scans = 0;
  std::size_t score_scans = 0;
};

struct TraversalState {
  explicit TraversalState(std::size_t n) : nodes(n), score(n, 0.0) {
    for (NodeId v = 0; v < n; ++v) nodes[v].community = v;
  }

  std::vector<NodeState> nodes;
  TraversalFrontier frontier;
  std::vector<double> score;             // value at categorization time
  std::vector<Categorization> order;     // categorization sequence
  std::vector<ProcessEvent> events;      // processing sequence
  TraversalCounters counters;

  Cover cover() const {
    std::vector<Label> l(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) l[v] = nodes[v].community;
    return Cover(std::move(l));
  }
};

/// Growing cluster with O(1) membership and incrementally maintained cut.
class ClusterAccumulator {
 public:
  explicit ClusterAccumulator(const Graph& g)
      : g_(&g), stamp_(g.node_count(), 0), total_volume_(g.total_strength()) {}

  void reset() {
    ++epoch_;
    members_.clear();
    volume_ = 0;
    cut_ = 0;
  }

  void reset(NodeId seed) {
    reset();
    add(seed);
  }

  bool contains(NodeId v) const { return stamp_.at(v) == epoch_; }

  /// Edge weight from t into the member set (k_{t,S}).
  Weight edges_into(NodeId t) {
    Weight k = 0;
    for (const auto& nb : g_->neighbors(t)) {
      if (stamp_[nb.id] == epoch_) k += nb.weight;
    }
    return k;
  }

  void add(NodeId t) { add(t, edges_into(t)); }

  /// Adds t given its precomputed k_{t,S}: cut' = (cut - k_tS) + (k_t - k_tS).
  void add(NodeId t, Weight k_tS) {
    if (contains(t)) return;
    const Weight k_t = g_->strength(t) - g_->self_loop_weight(t);
    cut_ = cut_ - k_tS + (k_t - k_tS);
    volume_ += g_->strength(t);
    stamp_[t] = epoch_;
    members_.push_back(t);
  }

  std::span<const NodeId> members() const { return members_; }
  Weight volume() const { return volume_; }
  Weight cut_size() const { return cut_; }
  Weight total_volume() const { return total_volume_; }

  double conductance() const {
    const Weight denom = std::min(volume_, total_volume_ - volume_);
    return denom == 0 ? 0.0 : static_cast<double>(cut_) / static_cast<double>(denom);
  }

 private:
  const Graph* g_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 1;
  std::vector<NodeId> members_;
  Weight volume_ = 0;
  Weight cut_ = 0;
  Weight total_volume_ = 0;
};

/// Conductance of a member set, built up one node at a time.
inline double conductance(const Graph& g, std::span<const NodeId> members) {
  ClusterAccumulator acc(g);
  acc.reset();
  for (NodeId v : members) acc.add(v);
  return acc.conductance();
}

/// Marks every uncovered neighbor of v as covered.
inline void spread(const Graph& g, NodeId v, TraversalState& st) {
  for (const auto& nb : g.neighbors(v)) {
    ++st.counters.spread_scans;
    auto& s = st.nodes[nb.id];
    if (!s.covered) {
      s.covered = true;
      ++st.frontier.cover_count;
    }
  }
}

/// Fraction of v's neighbors already covered; 0 for isolated nodes.
inline double ins_score(const Graph& g, NodeId v, std::span<const NodeState> nodes) {
  const auto nbs = g.neighbors(v);
  if (nbs.empty()) return 0.0;
  std::size_t covered = 0;
  for (const auto& nb : nbs) covered += nodes[nb.id].covered ? 1 : 0;
  return static_cast<double>(covered) / static_cast<double>(nbs.size());
}

namespace detail {

inline void record(TraversalState& st, NodeId u, NodeType type, double score, NodeId by) {
  st.nodes[u].type = type;
  st.score[u] = score;
  const std::size_t step = st.events.empty() ? 0 : st.events.size() - 1;
  st.order.push_back({u, type, score, by, step});
}

}  // namespace detail

/// INS-based categorization of v's uncategorized neighbors.
inline void node_cat_ins(const Graph& g, NodeId v, double r, TraversalState& st) {
  spread(g, v, st);
  for (const auto& nb : g.neighbors(v)) {
    ++st.counters.categorize_scans;
    const NodeId u = nb.id;
    if (st.nodes[u].type != NodeType::Uncategorized) continue;
    st.counters.score_scans += g.degree(u);
    const double ins = ins_score(g, u, st.nodes);
    if (ins < r) {
      detail::record(st, u, NodeType::Broker, ins, v);
      st.frontier.broker_stack.push_back(u);
    } else {
      detail::record(st, u, NodeType::Community, ins, v);
      st.nodes[u].community = st.nodes[v].community;
      st.frontier.community_queue.push_back(u);
    }
  }
}

struct CondDecision {
  int case_id;   // 1..3 for the closed-form cases, 0 for the degenerate volumes
  double bound;  // threshold k_{t,S} must strictly exceed
  NodeType type;
};

/// Decides whether adding target t to cluster S strictly lowers conductance,
/// from the degree sums alone:
///   k_t   degree of t,  k_tS edges from t into S,
///   k_S   volume of S,  k_O  volume of V \ (S + t),
///   alpha cut edges of S not incident on t.
/// Equality with the bound means no decrease, hence Broker.
inline CondDecision classify_cond_detail(Weight k_t, Weight k_tS, Weight k_S, Weight k_O,
                                         Weight alpha) {
  if (k_t < 0 || k_tS < 0 || k_S < 0 || k_O < 0 || alpha < 0) {
    throw std::invalid_argument("classify_cond: arguments must be non-negative");
  }
  if (k_tS > k_t) throw std::invalid_argument("classify_cond: k_tS exceeds k_t");

  // Degenerate volumes: the closed forms divide by k_S or k_O. With an empty
  // smaller side the conductance is 0, so S cannot improve when k_S = 0 and
  // S + t always improves (if it was positive) when k_O = 0.
  if (k_S == 0) return {0, 0.0, NodeType::Broker};
  if (k_O == 0) {
    return {0, 0.0, alpha + k_tS > 0 ? NodeType::Community : NodeType::Broker};
  }

  // Compare k_tS * den > num in integers to keep ties exact.
  Weight num = 0;
  Weight den = 1;
  int c = 0;
  if (k_S < k_t + k_O && k_S + k_t < k_O) {
    c = 1;
    num = k_t * (k_S - alpha);
    den = 2 * k_S + k_t;
  } else if (k_S < k_t + k_O) {
    c = 2;
    num = k_S * k_t + alpha * (k_S - k_O);
    den = k_S + k_O;
  } else {
    c = 3;
    num = k_t * (alpha + k_t + k_O);
    den = 2 * k_O + k_t;
  }
  const bool community = k_tS * den > num;
  return {c, static_cast<double>(num) / static_cast<double>(den),
          community ? NodeType::Community : NodeType::Broker};
}

inline NodeType classify_cond(Weight k_t, Weight k_tS, Weight k_S, Weight k_O, Weight alpha) {
  return classify_cond_detail(k_t, k_tS, k_S, k_O, alpha).type;
}

/// Conductance-based categorization of v's uncategorized neighbors against
/// the cluster in `acc` (which holds v). No spreading: nodes are covered as
/// they are categorized.
inline void node_cat_cond(const Graph& g, NodeId v, ClusterAccumulator& acc, TraversalState& st) {
  for (const auto& nb : g.neighbors(v)) {
    ++st.counters.categorize_scans;
    const NodeId u = nb.id;
    auto& s = st.nodes[u];
    if (s.type != NodeType::Uncategorized) continue;

    st.counters.score_scans += g.degree(u);
    const Weight k_t = static_cast<Weight>(g.degree(u));
    const Weight k_tS = acc.edges_into(u);
    const Weight alpha = acc.cut_size() - k_tS;
    const Weight k_O = acc.total_volume() - acc.volume() - k_t;
    if (classify_cond(k_t, k_tS, acc.volume(), k_O, alpha) == NodeType::Community) {
      acc.add(u, k_tS);
      detail::record(st, u, NodeType::Community, acc.conductance(), v);
      s.community = st.nodes[v].community;
      st.frontier.community_queue.push_back(u);
    } else {
      const Weight denom = std::min(acc.volume() + k_t, k_O);
      const double would_be =
          denom == 0 ? 0.0
                     : static_cast<double>(alpha + k_t - k_tS) / static_cast<double>(denom);
      detail::record(st, u, NodeType::Broker, would_be, v);
      st.frontier.broker_stack.push_back(u);
    }
    if (!s.covered) {
      s.covered = true;
      ++st.frontier.cover_count;
    }
  }
}

/// Runs the broker-stack / community-queue traversal and returns the state
/// after every node has been categorized. The community queue always drains
/// before a broker is popped. Disconnected inputs restart from the
/// lowest-degree uncovered node.
inline TraversalState run_lincom(const Graph& g, const RunConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.node_count();
  TraversalState st(n);
  if (n == 0) return st;
  if (cfg.start && *cfg.start >= n) throw std::out_of_range("start node out of range");

  // nodes ordered by (degree, id) for start and restart selection
  std::size_t max_deg = 0;
  for (NodeId v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
  std::vector<std::size_t> bucket(max_deg + 2, 0);
  for (NodeId v = 0; v < n; ++v) ++bucket[g.degree(v) + 1];
  for (std::size_t d = 1; d < bucket.size(); ++d) bucket[d] += bucket[d - 1];
  std::vector<NodeId> by_degree(n);
  for (NodeId v = 0; v < n; ++v) by_degree[bucket[g.degree(v)]++] = v;
  std::size_t cursor = 0;

  ClusterAccumulator acc(g);

  auto open = [&](NodeId v, Source src) {
    auto& s = st.nodes[v];
    s.covered = true;
    ++st.frontier.cover_count;
    st.events.push_back({v, src, st.frontier.community_queue.size()});
    detail::record(st, v, NodeType::Broker, cfg.method == Method::INS ? 0.0 : 1.0, v);
  };

  auto process = [&](NodeId v) {
    ++st.counters.processed;
    if (cfg.method == Method::INS) {
      node_cat_ins(g, v, cfg.threshold, st);
    } else {
      node_cat_cond(g, v, acc, st);
    }
  };

  NodeId first = by_degree[0];
  if (cfg.start) first = *cfg.start;
  open(first, Source::Start);
  acc.reset(first);
  process(first);

  auto& fr = st.frontier;
  while (fr.cover_count < n) {
    NodeId v;
    if (!fr.community_queue.empty()) {
      v = fr.community_queue.front();
      st.events.push_back({v, Source::Queue, fr.community_queue.size()});
      fr.community_queue.pop_front();
    } else if (!fr.broker_stack.empty()) {
      v = fr.broker_stack.back();
      fr.broker_stack.pop_back();
      st.events.push_back({v, Source::Stack, fr.community_queue.size()});
      acc.reset(v);
    } else {
      while (st.nodes[by_degree[cursor]].covered) ++cursor;
      v = by_degree[cursor];
      open(v, Source::Restart);
      acc.reset(v);
    }
    process(v);
  }
  return st;
}

}  // namespace lincom
