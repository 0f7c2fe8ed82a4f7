// Experiment harness: generate -> run -> verify -> report.
//
// Exit codes: 0 = all enabled checks passed, 1 = a check failed,
// 2 = spec or IO error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "congest/graph.hpp"
#include "congest/rng.hpp"
#include "congest/sim.hpp"
#include "congest/spanner.hpp"
#include "congest/verify.hpp"
#include "congest/wbfs.hpp"

using namespace congest;
using nlohmann::ordered_json;

namespace {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int thread_cap() {
  if (const char* env = std::getenv("CONGEST_SIM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// --graph accepts either a file path or "gen:<kind>,key=val,...", e.g.
// "gen:gnp,n=100,p=0.1,w=50" (w: redraw weights uniformly from {1..w}).
Graph resolve_graph(const std::string& spec, std::uint64_t seed) {
  if (!spec.starts_with("gen:")) {
    try {
      return load_graph_file(spec);
    } catch (const std::exception& e) {
      throw SpecError("graph file '" + spec + "': " + e.what());
    }
  }
  std::map<std::string, std::string> kv;
  std::stringstream ss(spec.substr(4));
  std::string tok, kind;
  while (std::getline(ss, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (!kind.empty()) throw SpecError("bad generator token '" + tok + "'");
      kind = tok;
    } else {
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  auto geti = [&](const std::string& k, int dflt) {
    return kv.count(k) ? std::stoi(kv.at(k)) : dflt;
  };
  auto getd = [&](const std::string& k, double dflt) {
    return kv.count(k) ? std::stod(kv.at(k)) : dflt;
  };
  GenParams p;
  p.n = geti("n", 0);
  p.rows = geti("rows", 0);
  p.cols = geti("cols", 0);
  GraphKind gk;
  if (kind == "gnp") {
    gk = GraphKind::Gnp;
    // Default density keeps gnp connected with high probability.
    p.p = getd("p", std::min(1.0, 4.0 * std::log(std::max(2, p.n)) /
                                      std::max(2, p.n)));
  } else if (kind == "path") {
    gk = GraphKind::Path;
  } else if (kind == "cycle") {
    gk = GraphKind::Cycle;
  } else if (kind == "complete") {
    gk = GraphKind::Complete;
  } else if (kind == "grid") {
    gk = GraphKind::Grid;
  } else if (kind == "star") {
    gk = GraphKind::Star;
  } else {
    throw SpecError("unknown generator '" + kind + "'");
  }
  try {
    Graph g = generate_graph(gk, p, derive_seed(seed, 0x10));
    if (int w = geti("w", 0); w > 0)
      g = assign_random_weights(g, w, derive_seed(seed, 0x11));
    return g;
  } catch (const std::exception& e) {
    throw SpecError(std::string("generator: ") + e.what());
  }
}

// --sources accepts "0,5,9" or "random:k".
std::vector<int> resolve_sources(const std::string& spec, const Graph& g,
                                 std::uint64_t seed) {
  std::vector<int> out;
  try {
    if (spec.starts_with("random:")) {
      int k = std::stoi(spec.substr(7));
      if (k < 1 || k > g.n) throw SpecError("source count out of range");
      std::vector<int> ids(g.n);
      std::iota(ids.begin(), ids.end(), 0);
      SplitMix64 rng(derive_seed(seed, 0x12));
      for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.uniform(0, g.n - 1 - i));
        std::swap(ids[i], ids[j]);
      }
      out.assign(ids.begin(), ids.begin() + k);
    } else {
      std::stringstream ss(spec);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception&) {
    throw SpecError("bad --sources spec '" + spec + "'");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw SpecError("empty source set");
  for (int s : out)
    if (s < 0 || s >= g.n) throw SpecError("source id out of range");
  return out;
}

void write_report(const ordered_json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw SpecError("cannot write '" + out_path + "'");
  f << report.dump(2) << "\n";
}

void maybe_write_trace(const Trace& trace, const std::string& path) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw SpecError("cannot write '" + path + "'");
  trace.write_jsonl(f);
}

std::set<Edge> full_edge_set(const Graph& g) {
  std::set<Edge> all;
  for (int u = 0; u < g.n; ++u)
    for (auto& [v, w] : g.adj[u])
      if (u < v) all.insert({u, v});
  return all;
}

Graph edges_to_graph(int n, const std::set<Edge>& h) {
  std::vector<std::tuple<int, int, Weight>> edges;
  for (auto& [u, v] : h) edges.emplace_back(u, v, 1);
  return make_graph(n, 1, edges);
}

// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string graph = "gen:gnp,n=64";
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
  bool verify = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--graph", o.graph, "file path or gen:<kind>,key=val,...");
  cmd->add_option("--seed", o.seed, "master seed; all randomness derives");
  cmd->add_option("--out", o.out, "report path (default stdout)");
  cmd->add_option("--trace", o.trace, "write the message trace as JSON lines");
  cmd->add_flag("--verify", o.verify, "run the independent checkers");
}

ordered_json graph_summary(const Graph& g, const CommonOpts& o) {
  return ordered_json{{"graph", o.graph},
                      {"seed", o.seed},
                      {"n", g.n},
                      {"m", g.edge_count()},
                      {"W", g.max_weight}};
}

int cmd_wbfs(const CommonOpts& o, const std::string& sources_spec,
             int rounds_override) {
  Graph g = resolve_graph(o.graph, o.seed);
  auto sources = resolve_sources(sources_spec, g, o.seed);
  int dia = diameter(g);
  int budget = static_cast<int>(sources.size()) + dia - 1;
  int rounds = rounds_override > 0 ? rounds_override : budget;
  SimConfig cfg;
  cfg.max_rounds = rounds;
  cfg.record_trace = !o.trace.empty() || o.verify;
  cfg.global_seed = o.seed;
  auto res = run_simulation(g, wbfs_factory(g, sources), cfg);
  maybe_write_trace(res.trace, o.trace);

  ordered_json report;
  report["spec"] = graph_summary(g, o);
  report["spec"]["command"] = "wbfs";
  report["spec"]["sources"] = sources;
  report["spec"]["rounds"] = rounds;
  report["diameter"] = dia;
  report["round_budget"] = budget;

  bool ok = true;
  if (o.verify) {
    int violations = 0;
    try {
      auto trees = extract_trees(res, sources);
      for (auto& [s, t] : trees)
        violations += static_cast<int>(verify::check_wbfs_tree(g, t).size());
    } catch (const IncompleteRun&) {
      ++violations;
    }
    // First round after which no digest changes again.
    int stabilized = res.trace.total_rounds;
    while (stabilized > 0 &&
           res.trace.digests[stabilized - 1] == res.trace.digests.back())
      --stabilized;
    auto inv = check_round_invariants(res.trace);
    report["verify"] = {{"tree_violations", violations},
                       {"invariant_violations", inv.size()},
                       {"round_stabilized", stabilized}};
    ok = violations == 0 && inv.empty() && stabilized <= budget;
  }
  write_report(report, o.out);
  return ok ? 0 : 1;
}

int cmd_detection(const CommonOpts& o, const std::string& sources_spec, int d,
                  int k) {
  Graph g = resolve_graph(o.graph, o.seed);
  if (d < 0 || k < 1) throw SpecError("need d >= 0 and k >= 1");
  auto sources = resolve_sources(sources_spec, g, o.seed);
  auto ans = solve_detection(g, sources, d, k);
  ordered_json report;
  report["spec"] = graph_summary(g, o);
  report["spec"]["command"] = "detection";
  report["spec"]["sources"] = sources;
  report["spec"]["d"] = d;
  report["spec"]["k"] = k;
  ordered_json lists = ordered_json::array();
  for (int v = 0; v < g.n; ++v) {
    ordered_json entries = ordered_json::array();
    for (auto& e : ans[v])
      entries.push_back({{"d", e.t.d}, {"s", e.t.s}, {"w", e.t.w},
                         {"parent", e.parent}});
    lists.push_back({{"node", v}, {"entries", entries}});
  }
  report["lists"] = lists;
  bool ok = true;
  if (o.verify) {
    auto viols = verify::check_detection(g, sources, d, k, ans);
    report["verify"] = {{"violations", viols.size()}};
    ok = viols.empty();
  }
  write_report(report, o.out);
  return ok ? 0 : 1;
}

int cmd_spanner(const CommonOpts& o, bool distributed, double c,
                const std::string& export_h) {
  Graph g = resolve_graph(o.graph, o.seed);
  PathBuyParams params;
  params.c = c;
  SpannerResult res;
  Trace trace;
  if (distributed) {
    std::tie(res, trace) = distributed_6ap(g, params, o.seed);
    maybe_write_trace(trace, o.trace);
  } else {
    res = sequential_6ap(g, params, o.seed);
  }

  ordered_json report;
  report["spec"] = graph_summary(g, o);
  report["spec"]["command"] = distributed ? "spanner-dist" : "spanner-seq";
  report["spec"]["c"] = c;
  report["n"] = g.n;
  report["m"] = g.edge_count();
  report["seed"] = o.seed;
  report["c"] = c;
  report["mode"] = distributed ? "distributed" : "sequential";
  report["edges_H"] = res.h.size();
  report["size_H0"] = res.h0.size();
  report["centers"] = res.centers.size();
  report["rounds"] = res.rounds;
  ordered_json per_k = ordered_json::array();
  for (auto& pk : res.per_k)
    per_k.push_back({{"k", pk.k},
                     {"sk_size", pk.sk_size},
                     {"paths_bought", pk.paths_bought}});
  report["per_k"] = per_k;

  bool ok = true;
  if (o.verify) {
    auto stretch = verify::check_stretch(g, res.h, 6);
    if (stretch.disconnected) {
      report["stretch_max"] = "inf";
      ok = false;
    } else {
      report["stretch_max"] = stretch.max_excess;
      ok = stretch.pass(6);
    }
  }
  if (!export_h.empty()) save_graph_file(edges_to_graph(g.n, res.h), export_h);
  write_report(report, o.out);
  return ok ? 0 : 1;
}

int cmd_verify(const CommonOpts& o, const std::string& h_path, int beta) {
  Graph g = resolve_graph(o.graph, o.seed);
  std::set<Edge> h;
  if (h_path.empty()) {
    h = full_edge_set(g);
  } else {
    Graph hg = resolve_graph(h_path, o.seed);
    if (hg.n != g.n) throw SpecError("subgraph node count mismatch");
    h = full_edge_set(hg);
    for (auto& [u, v] : h)
      if (!g.has_edge(u, v)) throw SpecError("subgraph edge not in graph");
  }
  auto stretch = verify::check_stretch(g, h, beta);
  ordered_json report;
  report["spec"] = graph_summary(g, o);
  report["spec"]["command"] = "verify";
  report["spec"]["beta"] = beta;
  report["edges_H"] = h.size();
  report["disconnected"] = stretch.disconnected;
  if (!stretch.disconnected) report["stretch_max"] = stretch.max_excess;
  report["pass"] = stretch.pass(beta);
  write_report(report, o.out);
  return stretch.pass(beta) ? 0 : 1;
}

struct SeedRow {
  std::uint64_t seed;
  int n, m, edges_h, rounds;
  long long stretch_max;
  double wall;
  bool ok;
};

// Runs f(i) for i in [0, count) on up to CONGEST_SIM_THREADS threads.
void parallel_for(int count, const std::function<void(int)>& f) {
  int threads = std::min(thread_cap(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) f(i);
    });
  for (auto& th : pool) th.join();
}

int cmd_bench(const CommonOpts& o, std::vector<std::uint64_t> seeds, double c,
              const std::string& format) {
  if (seeds.empty()) throw SpecError("bench needs at least one --seeds value");
  std::vector<SeedRow> rows(seeds.size());
  std::string first_error;
  std::mutex err_mu;
  parallel_for(static_cast<int>(seeds.size()), [&](int i) {
    try {
      auto t0 = std::chrono::steady_clock::now();
      Graph g = resolve_graph(o.graph, seeds[i]);
      PathBuyParams params;
      params.c = c;
      auto [res, trace] = distributed_6ap(g, params, seeds[i]);
      auto stretch = verify::check_stretch(g, res.h, 6);
      double wall = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      rows[i] = {seeds[i],
                 g.n,
                 g.edge_count(),
                 static_cast<int>(res.h.size()),
                 res.rounds,
                 stretch.disconnected ? -1 : stretch.max_excess,
                 wall,
                 stretch.pass(6)};
    } catch (const std::exception& e) {
      std::scoped_lock lk(err_mu);
      if (first_error.empty()) first_error = e.what();
    }
  });
  if (!first_error.empty()) throw SpecError(first_error);

  std::ostringstream body;
  if (format == "csv") {
    body << "seed,n,m,edges_H,rounds,stretch_max,wall_s\n";
    for (auto& r : rows)
      body << r.seed << ',' << r.n << ',' << r.m << ',' << r.edges_h << ','
           << r.rounds << ',' << r.stretch_max << ',' << r.wall << '\n';
  } else {
    ordered_json report;
    report["spec"] = {{"command", "bench"}, {"graph", o.graph}, {"c", c}};
    ordered_json arr = ordered_json::array();
    for (auto& r : rows)
      arr.push_back({{"seed", r.seed},
                     {"n", r.n},
                     {"m", r.m},
                     {"edges_H", r.edges_h},
                     {"rounds", r.rounds},
                     {"stretch_max", r.stretch_max},
                     {"pass", r.ok}});
    report["rows"] = arr;
    body << report.dump(2) << '\n';
  }
  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw SpecError("cannot write '" + o.out + "'");
    f << body.str();
  }
  return std::all_of(rows.begin(), rows.end(),
                     [](const SeedRow& r) { return r.ok; })
             ? 0
             : 1;
}

int cmd_trend(const CommonOpts& o, std::vector<int> sizes, int seeds_per,
              double c) {
  if (sizes.empty() || seeds_per < 1)
    throw SpecError("trend needs --sizes and --seeds-per >= 1");
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw SpecError("--sizes must be ascending");

  struct Cell {
    double sum_h = 0, sum_rounds = 0, max_a = 0;
  };
  std::vector<Cell> cells(sizes.size());
  const double kB = 4.0;  // matches the frozen acceptance regression bound
  std::string first_error;
  std::mutex mu;
  int total = static_cast<int>(sizes.size()) * seeds_per;
  parallel_for(total, [&](int idx) {
    int si = idx / seeds_per, sj = idx % seeds_per;
    try {
      int n = sizes[si];
      double p = std::min(1.0, 4.0 * std::log(n) / n);
      std::uint64_t seed = o.seed + static_cast<std::uint64_t>(sj);
      Graph g =
          generate_graph(GraphKind::Gnp, {.n = n, .p = p}, derive_seed(seed, 0x10));
      PathBuyParams params;
      params.c = c;
      auto [res, trace] = distributed_6ap(g, params, seed);
      double x = std::pow(n, 2.0 / 3.0) / std::cbrt(std::log(n));
      double a = (res.rounds - kB * diameter(g)) / x;
      std::scoped_lock lk(mu);
      cells[si].sum_h += static_cast<double>(res.h.size());
      cells[si].sum_rounds += res.rounds;
      cells[si].max_a = std::max(cells[si].max_a, a);
    } catch (const std::exception& e) {
      std::scoped_lock lk(mu);
      if (first_error.empty()) first_error = e.what();
    }
  });
  if (!first_error.empty()) throw SpecError(first_error);

  std::ostringstream body;
  body << "n,mean_edges_H,size_ratio,mean_rounds,rounds_bound_ratio\n";
  double fit_c = 0, fit_a = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    int n = sizes[i];
    double mean_h = cells[i].sum_h / seeds_per;
    double mean_r = cells[i].sum_rounds / seeds_per;
    double denom = std::pow(n, 4.0 / 3.0) * std::pow(std::log(n), 4.0 / 3.0);
    double x = std::pow(n, 2.0 / 3.0) / std::cbrt(std::log(n));
    double bound_ratio = mean_r / (cells[i].max_a * x + kB);
    fit_c = std::max(fit_c, mean_h / denom);
    fit_a = std::max(fit_a, cells[i].max_a);
    body << n << ',' << mean_h << ',' << mean_h / denom << ',' << mean_r << ','
         << bound_ratio << '\n';
  }
  body << "# fitted C=" << fit_c << " a=" << fit_a << " b=" << kB << '\n';
  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw SpecError("cannot write '" + o.out + "'");
    f << body.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-synchronous network algorithm harness"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string sources = "random:1";
  int rounds = 0, d = 0, k = 1, beta = 6, seeds_per = 1;
  double c = 3.0;
  std::string export_h, h_path, format = "json";
  std::vector<std::uint64_t> seeds;
  std::vector<int> sizes{64, 128, 256, 512};

  auto* wbfs = app.add_subcommand("wbfs", "multi-source tree construction");
  add_common(wbfs, o);
  wbfs->add_option("--sources", sources, "id list or random:k");
  wbfs->add_option("--rounds", rounds, "round budget override");

  auto* det = app.add_subcommand("detection", "truncated proximity lists");
  add_common(det, o);
  det->add_option("--sources", sources, "id list or random:k");
  det->add_option("--d", d, "distance threshold");
  det->add_option("--k", k, "list length cap");

  auto* sseq = app.add_subcommand("spanner-seq", "sequential +6 spanner");
  add_common(sseq, o);
  sseq->add_option("--c", c, "sampling constant");
  sseq->add_option("--export-h", export_h, "write H in the edge-list format");

  auto* sdist = app.add_subcommand("spanner-dist", "distributed +6 spanner");
  add_common(sdist, o);
  sdist->add_option("--c", c, "sampling constant");
  sdist->add_option("--export-h", export_h, "write H in the edge-list format");

  auto* ver = app.add_subcommand("verify", "stretch check of a subgraph");
  add_common(ver, o);
  ver->add_option("--subgraph", h_path,
                  "subgraph edge-list file (default: G itself)");
  ver->add_option("--beta", beta, "additive stretch bound");

  auto* bench = app.add_subcommand("bench", "per-seed spanner-dist table");
  add_common(bench, o);
  bench->add_option("--seeds", seeds, "seed list")->delimiter(',');
  bench->add_option("--c", c, "sampling constant");
  bench->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* trend = app.add_subcommand("trend", "size/round scaling table");
  add_common(trend, o);
  trend->add_option("--sizes", sizes, "ascending node counts")->delimiter(',');
  trend->add_option("--seeds-per", seeds_per, "seeds per size");
  trend->add_option("--c", c, "sampling constant");

  CLI11_PARSE(app, argc, argv);

  try {
    if (wbfs->parsed()) return cmd_wbfs(o, sources, rounds);
    if (det->parsed()) return cmd_detection(o, sources, d, k);
    if (sseq->parsed()) return cmd_spanner(o, false, c, export_h);
    if (sdist->parsed()) return cmd_spanner(o, true, c, export_h);
    if (ver->parsed()) return cmd_verify(o, h_path, beta);
    if (bench->parsed()) return cmd_bench(o, seeds, c, format);
    if (trend->parsed()) return cmd_trend(o, sizes, seeds_per, c);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
