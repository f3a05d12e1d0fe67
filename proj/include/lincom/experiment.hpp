#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lincom/graph.hpp"
#include "lincom/metrics.hpp"
#include "lincom/pipeline.hpp"

namespace lincom {

struct RunResult {
  double q = 0.0;
  std::size_t k = 0;
};

inline RunResult score(const Graph& g, const Cover& c) {
  return {g.node_count() == 0 ? 0.0 : modularity(g, c), c.community_count()};
}

/// Runs f(i) for i in [0, count) on up to `workers` threads. Results land in
/// slot i, so the output order never depends on scheduling.
template <class T, class F>
std::vector<T> run_indexed(std::size_t count, unsigned workers, F f) {
  std::vector<T> out(count);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) out[i] = f(i);
    });
  }
  return out;
}

/// Threshold grid from..to inclusive, stepped on an integer grid of 1e-6 so
/// that 0.4 + 7 * 0.05 lands on 0.75 rather than 0.7500000000000001.
inline std::vector<double> threshold_grid(double from, double to, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(from >= 0.0 && to <= 1.0 && from <= to)) {
    throw std::invalid_argument("thresholds must satisfy 0 <= from <= to <= 1");
  }
  std::vector<double> grid;
  const long long scale = 1000000;
  const long long a = std::llround(from * scale);
  const long long b = std::llround(to * scale);
  const long long s = std::llround(step * scale);
  if (s == 0) throw std::invalid_argument("step too small");
  for (long long x = a; x <= b; x += s) grid.push_back(static_cast<double>(x) / scale);
  return grid;
}

struct ThresholdPoint {
  double r;
  RunResult result;
};

inline std::vector<ThresholdPoint> sweep_threshold(const Graph& g, RunConfig base,
                                                   std::span<const double> grid,
                                                   unsigned workers = 1) {
  base.method = Method::INS;
  return run_indexed<ThresholdPoint>(grid.size(), workers, [&](std::size_t i) {
    RunConfig cfg = base;
    cfg.threshold = grid[i];
    const auto d = detect(g, cfg);
    return ThresholdPoint{grid[i], score(g, d.final_cover)};
  });
}

struct StartPoint {
  NodeId start;
  RunResult result;
};

/// Picks `sample` distinct start nodes (all of them when sample >= n),
/// returned in ascending id order.
inline std::vector<NodeId> sample_starts(std::size_t n, std::size_t sample, std::uint64_t seed) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  if (sample < n) {
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(sample);
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

inline std::vector<StartPoint> sweep_start(const Graph& g, RunConfig base,
                                           std::span<const NodeId> starts, unsigned workers = 1) {
  return run_indexed<StartPoint>(starts.size(), workers, [&](std::size_t i) {
    RunConfig cfg = base;
    cfg.start = starts[i];
    const auto d = detect(g, cfg);
    return StartPoint{starts[i], score(g, d.final_cover)};
  });
}

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double rsd = 0.0;     // stddev / mean
};

inline Summary summarize(std::span<const double> xs) {
  Summary s;
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
  s.rsd = s.mean == 0.0 ? 0.0 : s.stddev / std::abs(s.mean);
  return s;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of nothing");
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs at least two
/// distinct x values.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("a linear fit needs at least two distinct edge counts");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("a linear fit needs at least two distinct edge counts");
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

enum class Phase { Traversal, Full };

struct BenchRecord {
  double fraction;
  std::size_t edges;
  std::size_t run;
  double time_ms;
  RunResult result;
};

/// One sample per fraction (same seed for every repeat), `repeats` timed
/// runs on each. Parsing is outside the timed region by construction.
inline std::vector<BenchRecord> bench(const Graph& g, std::span<const double> fractions,
                                      std::size_t repeats, std::uint64_t seed, RunConfig cfg,
                                      Phase phase) {
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  cfg.run_modmax = phase == Phase::Full;
  std::vector<BenchRecord> out;
  for (double f : fractions) {
    const Graph sub = sample_edges(g, f, seed);
    for (std::size_t run = 0; run < repeats; ++run) {
      const auto d = detect(sub, cfg);
      const double ms = phase == Phase::Full ? d.traversal_ms + d.refine_ms : d.traversal_ms;
      out.push_back({f, sub.edge_count(), run, ms, score(sub, d.final_cover)});
    }
  }
  return out;
}

/// Least-squares fit of the per-fraction median time against edge count.
inline LinearFit fit_medians(std::span<const BenchRecord> records) {
  std::vector<double> xs, ys;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    std::vector<double> times;
    while (j < records.size() && records[j].fraction == records[i].fraction) {
      times.push_back(records[j].time_ms);
      ++j;
    }
    xs.push_back(static_cast<double>(records[i].edges));
    ys.push_back(median(times));
    i = j;
  }
  return fit_line(xs, ys);
}

}  // namespace lincom
