#pragma once

#include <chrono>

#include "lincom/cover.hpp"
#include "lincom/graph.hpp"
#include "lincom/refine.hpp"
#include "lincom/traversal.hpp"

namespace lincom {

struct Detection {
  TraversalState traversal{0};
  Cover initial;       // labels straight out of the traversal
  Cover allocated;     // after broker post-processing (may hold unassigned brokers)
  Cover final_cover;   // dense labels 0..k-1
  double traversal_ms = 0.0;  // traversal + broker allocation
  double refine_ms = 0.0;     // modularity refinement
};

/// Traversal, broker allocation and (unless disabled) modularity refinement.
inline Detection detect(const Graph& g, const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  Detection d;
  const auto t0 = clock::now();
  d.traversal = run_lincom(g, cfg);
  d.initial = d.traversal.cover();
  d.allocated = post_process(g, d.initial, d.traversal.nodes);
  const auto t1 = clock::now();
  if (cfg.run_modmax) {
    d.final_cover = finalize(refine(g, d.allocated));
  } else {
    d.final_cover = finalize(d.allocated);
  }
  const auto t2 = clock::now();
  d.traversal_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  d.refine_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return d;
}

}  // namespace lincom
