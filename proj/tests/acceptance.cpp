// Acceptance gate: ten end-to-end property checks, one pass/fail line each.
// Every tolerance and suite size is pinned here; exit code is the number of
// failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "congest/graph.hpp"
#include "congest/rng.hpp"
#include "congest/sim.hpp"
#include "congest/spanner.hpp"
#include "congest/verify.hpp"
#include "congest/wbfs.hpp"

using namespace congest;

namespace {

int g_sims_run = 0;              // simulations executed with bandwidth_check on
int g_bandwidth_violations = 0;  // BandwidthViolation seen anywhere

SimResult run_checked(const Graph& g, const ProgramFactory& f, SimConfig cfg) {
  cfg.bandwidth_check = true;
  ++g_sims_run;
  try {
    return run_simulation(g, f, cfg);
  } catch (const BandwidthViolation&) {
    ++g_bandwidth_violations;
    throw;
  }
}

// Redraw weights uniformly from {0,...,max_weight} (zero allowed), with a
// symmetric per-edge seed so both directions agree.
Graph weights_with_zero(const Graph& g, Weight max_weight, std::uint64_t seed) {
  std::vector<std::tuple<int, int, Weight>> edges;
  for (int u = 0; u < g.n; ++u)
    for (auto& [v, w] : g.adj[u])
      if (u < v) {
        SplitMix64 rng(derive_seed(seed, 0x2A, u, v));
        edges.emplace_back(u, v, static_cast<Weight>(
                                     rng.uniform(0, static_cast<std::uint64_t>(
                                                        max_weight))));
      }
  return make_graph(g.n, max_weight, edges);
}

std::vector<int> pick_sources(int n, int count, std::uint64_t seed) {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  SplitMix64 rng(derive_seed(seed, 0x51));
  for (int i = 0; i < count && i < n; ++i) {
    int j = i + static_cast<int>(rng.uniform(0, n - 1 - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(std::min(count, n));
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Expected proximity list of every node: one (d, s, w) triplet per source,
// taken from the all-pairs oracle, sorted lexicographically.
std::vector<std::vector<Triplet>> oracle_lists(const verify::LexAllPairs& lex,
                                               int n,
                                               const std::vector<int>& sources) {
  std::vector<std::vector<Triplet>> want(n);
  for (int v = 0; v < n; ++v) {
    for (int s : sources)
      want[v].push_back({lex.dist(s, v), s, lex.weight(s, v)});
    std::sort(want[v].begin(), want[v].end());
  }
  return want;
}

// Runs WBFS for exactly |S| + D - 1 rounds and compares every final list
// against the oracle. Returns false on the first mismatch.
bool wbfs_matches_oracle(const Graph& g, const verify::LexAllPairs& lex,
                         const std::vector<int>& sources, int dia,
                         bool record, std::vector<Trace>* traces) {
  SimConfig cfg;
  cfg.max_rounds = static_cast<int>(sources.size()) + dia - 1;
  cfg.record_trace = record;
  auto res = run_checked(g, wbfs_factory(g, sources), cfg);
  auto want = oracle_lists(lex, g.n, sources);
  for (int v = 0; v < g.n; ++v) {
    const auto& got = static_cast<const WbfsProgram*>(res.programs[v].get())
                          ->core()
                          .entries();
    if (static_cast<int>(got.size()) != static_cast<int>(want[v].size()))
      return false;
    for (std::size_t i = 0; i < got.size(); ++i)
      if (got[i].t != want[v][i]) return false;
  }
  if (record && traces) traces->push_back(std::move(res.trace));
  return true;
}

struct ExhaustiveStats {
  long long graphs = 0;
  long long failures = 0;
};

// All connected labeled graphs on n nodes via edge-mask enumeration, random
// weights in {0,...,n}, source-set sizes {1, 3, n}.
ExhaustiveStats exhaustive_small(int n) {
  ExhaustiveStats st;
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) slots.push_back({u, v});
  const int m = static_cast<int>(slots.size());
  std::vector<int> parent(n);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::tuple<int, int, Weight>> edges;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) < n - 1) continue;
    std::iota(parent.begin(), parent.end(), 0);
    int comps = n;
    edges.clear();
    SplitMix64 rng(derive_seed(mask, 0x19, n));
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1) {
        auto [u, v] = slots[i];
        int a = find(u), b = find(v);
        if (a != b) parent[a] = b, --comps;
        edges.emplace_back(u, v, static_cast<Weight>(rng.uniform(0, n)));
      }
    if (comps != 1) continue;
    ++st.graphs;
    Graph g = make_graph(n, n, edges);
    auto lex = verify::LexAllPairs::compute(g);
    int dia = 0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) dia = std::max(dia, lex.dist(u, v));
    for (int nsrc : {1, 3, n}) {
      if (nsrc > n) continue;
      auto sources = pick_sources(n, nsrc, mask);
      if (!wbfs_matches_oracle(g, lex, sources, dia, false, nullptr))
        ++st.failures;
    }
  }
  return st;
}

struct RandomSuiteResult {
  int failures = 0;
  std::vector<Trace> traces;  // recorded on the smaller instances
};

Graph random_suite_graph(int index, std::uint64_t seed, int* n_out) {
  SplitMix64 rng(derive_seed(seed, 0x4D, index));
  int n = 10 + static_cast<int>(rng.uniform(0, 190));
  double mult = 1.5 * static_cast<double>(1 + index % 3);
  double p = std::min(1.0, mult * std::log(n) / n);
  Graph topo = generate_graph(GraphKind::Gnp, {.n = n, .p = p}, rng.next());
  *n_out = n;
  return weights_with_zero(topo, n, rng.next());
}

RandomSuiteResult random_wbfs_suite() {
  RandomSuiteResult out;
  for (int i = 0; i < 200; ++i) {
    int n = 0;
    Graph g = random_suite_graph(i, 1001, &n);
    auto lex = verify::LexAllPairs::compute(g);
    int dia = diameter(g);
    bool record = n <= 50 && out.traces.size() < 40;
    for (int nsrc : {1, 3, n}) {
      auto sources = pick_sources(n, nsrc, 1000 + i);
      if (!wbfs_matches_oracle(g, lex, sources, dia, record, &out.traces))
        ++out.failures;
    }
  }
  return out;
}

bool criterion2() {
  // Path with the source at one end: |S| + D - 2 rounds must leave the far
  // node without an entry.
  Graph p = generate_graph(GraphKind::Path, {.n = 50}, 0);
  {
    SimConfig cfg;
    cfg.max_rounds = 1 + 49 - 2;
    auto res = run_checked(p, wbfs_factory(p, {0}), cfg);
    const auto& far = static_cast<const WbfsProgram*>(res.programs[49].get())
                          ->core()
                          .entries();
    if (!far.empty()) return false;
  }
  // Stabilization: |S| + D - 1 + n extra rounds change nothing afterwards.
  for (std::uint64_t seed : {3u, 8u}) {
    Graph g = assign_random_weights(
        generate_graph(GraphKind::Gnp, {.n = 40, .p = 0.15}, seed), 40, seed);
    std::vector<int> sources = pick_sources(g.n, 3, seed);
    int settle = 3 + diameter(g) - 1;
    SimConfig cfg;
    cfg.max_rounds = settle + g.n;
    cfg.record_trace = true;
    auto res = run_checked(g, wbfs_factory(g, sources), cfg);
    for (int r = settle; r < static_cast<int>(res.trace.digests.size()); ++r)
      if (res.trace.digests[r] != res.trace.digests[settle]) return false;
  }
  return true;
}

bool criterion3(const std::vector<Trace>& traces) {
  if (traces.empty()) return false;
  for (const Trace& t : traces)
    if (!check_round_invariants(t).empty()) return false;
  // The adversarial trace must be caught: a send whose d + index < round.
  Trace bad;
  bad.has_digests = true;
  bad.total_rounds = 5;
  std::vector<Triplet> list{{0, 0, 0}, {1, 1, 7}};
  bad.digests.assign(6, {list, list});
  bad.messages.push_back({5, 0, 1, Message::triplet({1, 1, 7})});
  return check_round_invariants(bad).size() == 1;
}

bool criterion4() {
  int done = 0;
  for (int i = 0; done < 50; ++i) {
    SplitMix64 rng(derive_seed(4000, 0x33, i));
    int n = 12 + static_cast<int>(rng.uniform(0, 68));
    double p = std::min(1.0, 2.5 * std::log(n) / n);
    Graph g = weights_with_zero(
        generate_graph(GraphKind::Gnp, {.n = n, .p = p}, rng.next()), n,
        rng.next());
    int dia = diameter(g);
    int nsrc = 2 + static_cast<int>(rng.uniform(0, n / 2));
    auto sources = pick_sources(n, nsrc, rng.next());
    int ns = static_cast<int>(sources.size());
    const int ds[4] = {0, 1, dia / 2, dia};
    const int ks[4] = {1, ns / 2, ns, ns + 5};
    int d = ds[i % 4], k = std::max(1, ks[(i / 4) % 4]);
    ++g_sims_run;
    auto ans = solve_detection(g, sources, d, k);
    if (!verify::check_detection(g, sources, d, k, ans).empty()) return false;
    ++done;
  }
  return true;
}

struct SpannerRun {
  int n, rounds, dia;
};

bool criterion5(std::vector<SpannerRun>& runs) {
  int idx = 0;
  for (int n : {60, 120, 240}) {
    for (int i = 0; i < 17; ++i, ++idx) {
      if (idx >= 50) break;
      double mult = 1.2 + 0.9 * (i % 4);
      double p = std::min(1.0, mult * std::log(n) / n);
      Graph g =
          generate_graph(GraphKind::Gnp, {.n = n, .p = p}, 5000 + idx);
      PathBuyParams params;  // c = 3
      auto seq = sequential_6ap(g, params, 5000 + idx);
      if (!verify::check_stretch(g, seq.h, 6).pass(6)) return false;
      ++g_sims_run;
      auto [dist, trace] = distributed_6ap(g, params, 5000 + idx);
      if (!verify::check_stretch(g, dist.h, 6).pass(6)) return false;
      runs.push_back({n, dist.rounds, diameter(g)});
    }
  }
  return true;
}

bool criterion6(std::string& note) {
  std::vector<double> means;
  for (int n : {64, 128, 256, 512}) {
    double p = std::min(1.0, 4.0 * std::log(n) / n);
    double sum = 0;
    for (int s = 0; s < 20; ++s) {
      Graph g = generate_graph(GraphKind::Gnp, {.n = n, .p = p}, 6000 + s);
      auto res = sequential_6ap(g, {}, 6000 + s);
      sum += static_cast<double>(res.h.size());
    }
    double denom = std::pow(n, 4.0 / 3.0) * std::pow(std::log(n), 4.0 / 3.0);
    means.push_back(sum / 20.0 / denom);
  }
  auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  char buf[96];
  std::snprintf(buf, sizeof buf, "ratio spread %.2fx (%.3f..%.3f)", *hi / *lo,
                *lo, *hi);
  note = buf;
  return *hi / *lo < 3.0;
}

bool criterion7(const std::vector<SpannerRun>& c5runs, std::string& note) {
  // Fitted on the reference run (max implied a was 47.75 at b = 4) and frozen
  // with ~25% headroom.
  const double kA = 60.0, kB = 4.0;
  std::vector<SpannerRun> runs = c5runs;
  for (int n : {64, 384, 512}) {
    double p = std::min(1.0, 3.0 * std::log(n) / n);
    Graph g = generate_graph(GraphKind::Gnp, {.n = n, .p = p}, 7000 + n);
    ++g_sims_run;
    auto [res, trace] = distributed_6ap(g, {}, 7000 + n);
    runs.push_back({n, res.rounds, diameter(g)});
  }
  double worst_a = 0;
  bool ok = true;
  for (const auto& r : runs) {
    double x = std::pow(r.n, 2.0 / 3.0) / std::cbrt(std::log(r.n));
    worst_a = std::max(worst_a, (r.rounds - kB * r.dia) / x);
    if (r.rounds > kA * x + kB * r.dia) ok = false;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max implied a = %.2f vs frozen %.1f (b=%.1f)",
                worst_a, kA, kB);
  note = buf;
  return ok;
}

bool criterion9() {
  for (int i = 0; i < 30; ++i) {
    int n = 40 + 3 * i;
    double p = std::min(1.0, 2.5 * std::log(n) / n);
    Graph g = generate_graph(GraphKind::Gnp, {.n = n, .p = p}, 9000 + i);
    std::uint64_t seed = 9100 + i;
    auto seq = sequential_6ap(g, {}, seed);
    ++g_sims_run;
    auto [dist, trace] = distributed_6ap(g, {}, seed);
    if (dist.centers != seq.centers) return false;
    if (dist.h0 != seq.h0) return false;
    if (dist.sk_members != seq.sk_members) return false;
  }
  return true;
}

bool criterion10(std::string& note) {
  double worst = 1.0;
  for (int i = 0; i < 20; ++i) {
    SplitMix64 rng(derive_seed(10000, 0x61, i));
    int n = (i < 6) ? 8 + i : 13 + static_cast<int>(rng.uniform(0, 47));
    double p = std::min(1.0, 3.0 * std::log(n) / n);
    Graph topo = generate_graph(GraphKind::Gnp, {.n = n, .p = p}, rng.next());
    Weight w = static_cast<Weight>(n) * n * n;
    Graph g = assign_random_weights(topo, w, rng.next());
    double frac = verify::unique_lightest_fraction(g);
    if (n <= 12) {
      if (frac != verify::unique_lightest_fraction_brute(g)) return false;
    } else {
      // Reversing all node labels flips every id-based tie order; the
      // uniqueness fraction must be invariant.
      std::vector<std::tuple<int, int, Weight>> edges;
      for (int u = 0; u < n; ++u)
        for (auto& [v, wt] : g.adj[u])
          if (u < v) edges.emplace_back(n - 1 - v, n - 1 - u, wt);
      Graph rev = make_graph(n, w, edges);
      if (frac != verify::unique_lightest_fraction(rev)) return false;
    }
    worst = std::min(worst, frac);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "min unique fraction %.4f", worst);
  note = buf;
  return worst >= 0.95;
}

int g_failures = 0;

void report(int id, bool pass, const std::string& what) {
  if (!pass) ++g_failures;
  std::printf("criterion %2d: %s - %s\n", id, pass ? "PASS" : "FAIL",
              what.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();

  // 1: exact list agreement with the all-pairs oracle.
  auto rnd = random_wbfs_suite();
  long long ex_graphs = 0, ex_failures = 0;
  for (int n = 2; n <= 7; ++n) {
    auto st = exhaustive_small(n);
    ex_graphs += st.graphs;
    ex_failures += st.failures;
  }
  double secs1 = std::chrono::duration<double>(clock::now() - t0).count();
  {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "wbfs lists == oracle: 200 random + %lld exhaustive graphs "
                  "(%.0fs)",
                  ex_graphs, secs1);
    report(1, rnd.failures == 0 && ex_failures == 0 && ex_graphs > 1800000,
           buf);
  }

  report(2, criterion2(), "round tightness and stabilization");
  report(3, criterion3(rnd.traces),
         "trace invariants clean on " + std::to_string(rnd.traces.size()) +
             " traces, adversarial trace caught");
  report(4, criterion4(), "detection matches oracle truncation, 50 instances");

  std::vector<SpannerRun> spanner_runs;
  auto t5 = clock::now();
  bool c5 = criterion5(spanner_runs);
  double secs5 = std::chrono::duration<double>(clock::now() - t5).count();
  {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "stretch <= +6 in both modes, 50 instances (%.0fs)", secs5);
    report(5, c5, buf);
  }

  std::string note6;
  bool c6 = criterion6(note6);
  report(6, c6, "size shape: " + note6);

  std::string note7;
  bool c7 = criterion7(spanner_runs, note7);
  report(7, c7, "round budget: " + note7);

  report(8,
         g_bandwidth_violations == 0 && g_sims_run > 200,
         "zero bandwidth violations across " + std::to_string(g_sims_run) +
             " checked runs");
  report(9, criterion9(), "seed-aligned mode agreement, 30 instances");

  std::string note10;
  bool c10 = criterion10(note10);
  report(10, c10, "tie-breaking uniqueness: " + note10);

  double total = std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("%d/10 criteria passed (%.0fs total)\n", 10 - g_failures, total);
  return g_failures;
}
