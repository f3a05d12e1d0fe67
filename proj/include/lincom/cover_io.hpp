#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lincom/cover.hpp"
#include "lincom/graph.hpp"

namespace lincom {

/// Cover file problem; carries the offending node labels.
class CoverFileError : public std::runtime_error {
 public:
  CoverFileError(const std::string& what, std::vector<std::string> labels)
      : std::runtime_error(what), labels_(std::move(labels)) {}
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
};

/// "node_label<TAB>community" per line, sorted by node label.
inline void write_cover(std::ostream& out, const Graph& g, const Cover& cover) {
  if (cover.size() != g.node_count()) throw std::invalid_argument("cover size mismatch");
  std::vector<NodeId> order(g.node_count());
  for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return g.label(a) < g.label(b); });
  for (NodeId v : order) out << g.label(v) << '\t' << cover.label(v) << '\n';
}

/// Parses a cover file against g. Unknown labels, duplicate lines and
/// nodes without a line are reported with their labels.
inline Cover read_cover(std::istream& in, const Graph& g) {
  Cover cover(g.node_count());
  std::vector<std::string> unknown;
  std::vector<std::string> repeated;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tok(line);
    std::string node;
    std::string extra;
    Label community = 0;
    if (!(tok >> node >> community) || (tok >> extra) || community < 0) {
      throw ParseError(lineno, "expected '<node> <community id>', got '" + line + "'");
    }
    auto v = g.find(node);
    if (!v) {
      unknown.push_back(node);
      continue;
    }
    if (cover.assigned(*v)) repeated.push_back(node);
    cover.assign(*v, community);
  }
  if (!unknown.empty()) throw CoverFileError("cover names nodes not in the graph", unknown);
  if (!repeated.empty()) throw CoverFileError("cover assigns nodes more than once", repeated);
  std::vector<std::string> missing;
  for (NodeId v : cover.unassigned()) missing.push_back(g.label(v));
  if (!missing.empty()) throw CoverFileError("cover is missing nodes", missing);
  return cover;
}

}  // namespace lincom
