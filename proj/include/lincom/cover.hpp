#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "lincom/graph.hpp"

namespace lincom {

using Label = std::int64_t;
inline constexpr Label kUnassigned = -1;

/// Disjoint assignment of nodes to community labels. A node may be left
/// unassigned (broker ties); such nodes are carried as singletons later.
class Cover {
 public:
  Cover() = default;
  explicit Cover(std::size_t n) : labels_(n, kUnassigned) {}
  explicit Cover(std::vector<Label> labels) : labels_(std::move(labels)) {
    for (Label l : labels_) {
      if (l < 0 && l != kUnassigned) throw std::invalid_argument("negative community label");
    }
  }

  static Cover singletons(std::size_t n) {
    std::vector<Label> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<Label>(i);
    return Cover(std::move(l));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  Label label(NodeId v) const { return labels_.at(v); }
  bool assigned(NodeId v) const { return labels_.at(v) != kUnassigned; }

  void assign(NodeId v, Label l) {
    if (l < 0) throw std::invalid_argument("negative community label");
    labels_.at(v) = l;
  }
  void unassign(NodeId v) { labels_.at(v) = kUnassigned; }

  const std::vector<Label>& labels() const noexcept { return labels_; }

  std::vector<NodeId> unassigned() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < labels_.size(); ++v) {
      if (labels_[v] == kUnassigned) out.push_back(v);
    }
    return out;
  }

  bool complete() const {
    return std::none_of(labels_.begin(), labels_.end(), [](Label l) { return l == kUnassigned; });
  }

  /// label -> sorted members; the inverse of the assignment.
  std::map<Label, std::vector<NodeId>> communities() const {
    std::map<Label, std::vector<NodeId>> out;
    for (NodeId v = 0; v < labels_.size(); ++v) {
      if (labels_[v] != kUnassigned) out[labels_[v]].push_back(v);
    }
    return out;
  }

  std::size_t community_count() const {
    std::vector<Label> l;
    l.reserve(labels_.size());
    for (Label x : labels_) {
      if (x != kUnassigned) l.push_back(x);
    }
    std::sort(l.begin(), l.end());
    return static_cast<std::size_t>(std::unique(l.begin(), l.end()) - l.begin());
  }

  /// Every unassigned node gets a fresh label above all labels in use.
  Cover with_singletons() const {
    Cover out = *this;
    Label next = 0;
    for (Label l : labels_) next = std::max(next, l + 1);
    for (auto& l : out.labels_) {
      if (l == kUnassigned) l = next++;
    }
    return out;
  }

  friend bool operator==(const Cover&, const Cover&) = default;

 private:
  std::vector<Label> labels_;
};

/// Maps labels to 0..k-1 ordered by each community's smallest member id.
/// Unassigned nodes become singleton communities first.
inline Cover finalize(const Cover& cover) {
  const Cover full = cover.with_singletons();
  std::unordered_map<Label, Label> dense;
  std::vector<Label> out(full.size());
  for (NodeId v = 0; v < full.size(); ++v) {
    auto [it, inserted] = dense.try_emplace(full.label(v), static_cast<Label>(dense.size()));
    out[v] = it->second;
  }
  return Cover(std::move(out));
}

/// Same partition up to relabeling.
inline bool same_partition(const Cover& a, const Cover& b) {
  return a.size() == b.size() && finalize(a) == finalize(b);
}

}  // namespace lincom
