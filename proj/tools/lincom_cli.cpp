// lincom command-line tool: detect, eval, bench, sweep-threshold, sweep-start.
//
// Exit status is 0 on success and 2 on any usage or input problem. Output
// files are written only after the whole computation succeeded.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "lincom/cover_io.hpp"
#include "lincom/experiment.hpp"
#include "lincom/metrics.hpp"
#include "lincom/pipeline.hpp"

namespace {

using namespace lincom;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ostringstream classic_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  return os;
}

std::string fixed(double x, int digits) {
  auto os = classic_stream();
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

struct Loaded {
  Graph graph;
  double parse_ms;
};

IdOrder parse_ids(const std::string& s) {
  if (s == "appearance") return IdOrder::FirstAppearance;
  if (s == "numeric") return IdOrder::Numeric;
  throw UsageError("--ids must be 'appearance' or 'numeric'");
}

Loaded load(const std::string& path, const std::string& ids) {
  const IdOrder order = parse_ids(ids);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read input file '" + path + "'");
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto lg = load_edge_list(in, order);
    const auto t1 = std::chrono::steady_clock::now();
    return {std::move(lg.graph), std::chrono::duration<double, std::milli>(t1 - t0).count()};
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Method parse_method(const std::string& s) {
  if (s == "ins") return Method::INS;
  if (s == "cond") return Method::COND;
  throw UsageError("--method must be 'ins' or 'cond'");
}

void check_threshold(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw UsageError("--threshold must lie in [0, 1]");
}

std::optional<NodeId> parse_start(const Graph& g, const std::string& s) {
  if (s == "auto") return std::nullopt;
  auto v = g.find(s);
  if (!v) throw UsageError("start node '" + s + "' is not in the graph");
  return v;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << body;
  if (!out) throw UsageError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------

struct DetectArgs {
  std::string input, output, method = "ins", start = "auto", ids = "appearance";
  double threshold = 0.75;
  bool skip_modmax = false;
};

int cmd_detect(const DetectArgs& a) {
  check_threshold(a.threshold);
  const Method method = parse_method(a.method);
  const auto [g, parse_ms] = load(a.input, a.ids);

  RunConfig cfg;
  cfg.method = method;
  cfg.threshold = a.threshold;
  cfg.start = parse_start(g, a.start);
  cfg.run_modmax = !a.skip_modmax;
  const auto d = detect(g, cfg);
  const RunResult r = score(g, d.final_cover);

  auto body = classic_stream();
  write_cover(body, g, d.final_cover);
  write_file(a.output, body.str());

  auto line = classic_stream();
  line << g.node_count() << '\t' << g.edge_count() << '\t' << r.k << '\t' << fixed(r.q, 3) << '\t'
       << fixed(d.traversal_ms + d.refine_ms, 3) << '\n';
  std::cout << line.str();
  std::cerr << "parse_ms\t" << fixed(parse_ms, 3) << "\ttraversal_ms\t" << fixed(d.traversal_ms, 3)
            << "\trefine_ms\t" << fixed(d.refine_ms, 3) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string input, cover, ids = "appearance";
};

int cmd_eval(const EvalArgs& a) {
  const auto [g, parse_ms] = load(a.input, a.ids);
  (void)parse_ms;
  std::ifstream in(a.cover);
  if (!in) throw UsageError("cannot read cover file '" + a.cover + "'");
  Cover cover;
  try {
    cover = read_cover(in, g);
  } catch (const CoverFileError& e) {
    std::string msg = e.what();
    msg += ":";
    for (const auto& l : e.labels()) msg += " " + l;
    throw UsageError(msg);
  } catch (const ParseError& e) {
    throw UsageError(a.cover + ":" + std::to_string(e.line()) + ": " + e.what());
  }

  const CoverStats st = cover_stats(g, cover);
  auto os = classic_stream();
  os << "Q\t" << fixed(g.node_count() ? st.modularity : 0.0, 6) << '\n';
  os << "k\t" << st.community_count << '\n';
  os << "size_histogram";
  for (const auto& [size, count] : st.size_histogram) os << '\t' << size << ':' << count;
  os << '\n';
  os << "community\tsize\tconductance\n";
  for (std::size_t i = 0; i < st.labels.size(); ++i) {
    os << st.labels[i] << '\t' << st.sizes[i] << '\t' << fixed(st.conductances[i], 6) << '\n';
  }
  std::cout << os.str();
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string input, method = "ins", phase = "traversal", dataset, ids = "appearance";
  std::vector<double> fractions{0.25, 0.5, 0.75, 1.0};
  std::size_t repeats = 5;
  std::uint64_t seed = 1;
  double threshold = 0.75;
};

int cmd_bench(const BenchArgs& a) {
  check_threshold(a.threshold);
  RunConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.threshold = a.threshold;
  Phase phase;
  if (a.phase == "traversal") {
    phase = Phase::Traversal;
  } else if (a.phase == "full") {
    phase = Phase::Full;
  } else {
    throw UsageError("--phase must be 'traversal' or 'full'");
  }
  for (double f : a.fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw UsageError("fractions must lie in (0, 1]");
  }
  {
    std::vector<double> distinct(a.fractions);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) {
      throw UsageError("a linear fit needs at least two distinct fractions");
    }
  }
  if (a.repeats < 1) throw UsageError("--repeats must be at least 1");

  const auto [g, parse_ms] = load(a.input, a.ids);
  const std::string name =
      a.dataset.empty() ? std::filesystem::path(a.input).stem().string() : a.dataset;
  const auto records = bench(g, a.fractions, a.repeats, a.seed, cfg, phase);

  LinearFit fit;
  try {
    fit = fit_medians(records);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  auto os = classic_stream();
  os << "dataset,fraction,method,phase,run,time_ms,Q,k\n";
  for (const auto& r : records) {
    os << name << ',' << fixed(r.fraction, 4) << ',' << a.method << ',' << a.phase << ',' << r.run
       << ',' << fixed(r.time_ms, 4) << ',' << fixed(r.result.q, 6) << ',' << r.result.k << '\n';
  }
  std::cout << os.str();
  auto err = classic_stream();
  err << "parse_ms=" << fixed(parse_ms, 3) << " slope_ms_per_edge=" << fit.slope
      << " intercept_ms=" << fit.intercept << " r2=" << fixed(fit.r2, 6) << '\n';
  std::cerr << err.str();
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepThresholdArgs {
  std::string input, start = "auto", ids = "appearance";
  double from = 0.4, to = 0.85, step = 0.05;
  unsigned workers = 1;
};

int cmd_sweep_threshold(const SweepThresholdArgs& a) {
  std::vector<double> grid;
  try {
    grid = threshold_grid(a.from, a.to, a.step);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto [g, parse_ms] = load(a.input, a.ids);
  (void)parse_ms;
  RunConfig cfg;
  cfg.start = parse_start(g, a.start);
  const auto pts = sweep_threshold(g, cfg, grid, a.workers);
  auto os = classic_stream();
  os << "r,Q,k\n";
  for (const auto& p : pts) os << fixed(p.r, 4) << ',' << fixed(p.result.q, 6) << ',' << p.result.k << '\n';
  std::cout << os.str();
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepStartArgs {
  std::string input, sample = "all", method = "ins", ids = "appearance";
  std::uint64_t seed = 1;
  double threshold = 0.75;
  unsigned workers = 1;
};

int cmd_sweep_start(const SweepStartArgs& a) {
  check_threshold(a.threshold);
  RunConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.threshold = a.threshold;
  std::size_t sample = 0;
  bool all = a.sample == "all";
  if (!all) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(a.sample, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != a.sample.size() || a.sample[0] == '-' || v == 0) {
      throw UsageError("--sample must be 'all' or a positive integer");
    }
    sample = static_cast<std::size_t>(v);
  }

  const auto [g, parse_ms] = load(a.input, a.ids);
  (void)parse_ms;
  const std::size_t n = g.node_count();
  const auto starts = sample_starts(n, all ? n : sample, a.seed);
  const auto pts = sweep_start(g, cfg, starts, a.workers);

  auto os = classic_stream();
  os << "start,degree,Q,k\n";
  std::vector<double> qs;
  for (const auto& p : pts) {
    os << g.label(p.start) << ',' << g.degree(p.start) << ',' << fixed(p.result.q, 6) << ','
       << p.result.k << '\n';
    qs.push_back(p.result.q);
  }
  std::cout << os.str();
  const Summary s = summarize(qs);
  auto err = classic_stream();
  err << "starts=" << qs.size() << " mean=" << fixed(s.mean, 6) << " stddev=" << fixed(s.stddev, 6)
      << " rsd=" << fixed(s.rsd, 6) << '\n';
  std::cerr << err.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection by broker/community traversal with modularity refinement"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const std::string ids_help = "node id order: appearance (default) or numeric label value";

  DetectArgs da;
  auto* detect_cmd = app.add_subcommand("detect", "detect communities and write a cover file");
  detect_cmd->add_option("--input", da.input, "edge list")->required();
  detect_cmd->add_option("--method", da.method, "ins or cond")->capture_default_str();
  detect_cmd->add_option("--threshold", da.threshold, "INS threshold r")->capture_default_str();
  detect_cmd->add_option("--start", da.start, "start node label or 'auto'")->capture_default_str();
  detect_cmd->add_flag("--skip-modmax", da.skip_modmax, "stop after broker allocation");
  detect_cmd->add_option("--output", da.output, "cover file to write")->required();
  detect_cmd->add_option("--ids", da.ids, ids_help)->capture_default_str();

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "score a cover file against a graph");
  eval_cmd->add_option("--input", ea.input, "edge list")->required();
  eval_cmd->add_option("--cover", ea.cover, "cover file")->required();
  eval_cmd->add_option("--ids", ea.ids, ids_help)->capture_default_str();

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "time detection on sampled edge fractions");
  bench_cmd->add_option("--input", ba.input, "edge list")->required();
  bench_cmd->add_option("--fractions", ba.fractions, "edge fractions, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--repeats", ba.repeats, "timed runs per fraction")->capture_default_str();
  bench_cmd->add_option("--seed", ba.seed, "sampling seed")->capture_default_str();
  bench_cmd->add_option("--method", ba.method, "ins or cond")->capture_default_str();
  bench_cmd->add_option("--phase", ba.phase, "traversal or full")->capture_default_str();
  bench_cmd->add_option("--threshold", ba.threshold, "INS threshold r")->capture_default_str();
  bench_cmd->add_option("--dataset", ba.dataset, "name for the dataset column (default: file stem)");
  bench_cmd->add_option("--ids", ba.ids, ids_help)->capture_default_str();

  SweepThresholdArgs ta;
  auto* sweep_t = app.add_subcommand("sweep-threshold", "INS detection over a threshold grid");
  sweep_t->add_option("--input", ta.input, "edge list")->required();
  sweep_t->add_option("--from", ta.from)->capture_default_str();
  sweep_t->add_option("--to", ta.to)->capture_default_str();
  sweep_t->add_option("--step", ta.step)->capture_default_str();
  sweep_t->add_option("--start", ta.start, "start node label or 'auto'")->capture_default_str();
  sweep_t->add_option("--workers", ta.workers, "parallel detections")->capture_default_str();
  sweep_t->add_option("--ids", ta.ids, ids_help)->capture_default_str();

  SweepStartArgs sa;
  auto* sweep_s = app.add_subcommand("sweep-start", "detection from many start nodes");
  sweep_s->add_option("--input", sa.input, "edge list")->required();
  sweep_s->add_option("--sample", sa.sample, "'all' or number of start nodes")->capture_default_str();
  sweep_s->add_option("--seed", sa.seed, "sampling seed")->capture_default_str();
  sweep_s->add_option("--threshold", sa.threshold, "INS threshold r")->capture_default_str();
  sweep_s->add_option("--method", sa.method, "ins or cond")->capture_default_str();
  sweep_s->add_option("--workers", sa.workers, "parallel detections")->capture_default_str();
  sweep_s->add_option("--ids", sa.ids, ids_help)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*detect_cmd) return cmd_detect(da);
    if (*eval_cmd) return cmd_eval(ea);
    if (*bench_cmd) return cmd_bench(ba);
    if (*sweep_t) return cmd_sweep_threshold(ta);
    if (*sweep_s) return cmd_sweep_start(sa);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
