#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "congest/graph.hpp"
#include "congest/spanner.hpp"
#include "congest/verify.hpp"

using namespace congest;

namespace {

PathBuyParams forced(std::vector<int> centers, double c = 3.0) {
  PathBuyParams p;
  p.c = c;
  p.forced_centers = std::move(centers);
  return p;
}

bool h_subset_of_g(const Graph& g, const std::set<Edge>& h) {
  return std::all_of(h.begin(), h.end(),
                     [&](const Edge& e) { return g.has_edge(e.first, e.second); });
}

}  // namespace

TEST_CASE("sampling parameters") {
  PathBuyParams p;
  // c=3, n=64: 3 / (4 * ln(64)^{1/3}) computed independently.
  double expect = 3.0 / (std::cbrt(64.0) * std::cbrt(std::log(64.0)));
  CHECK(p.center_prob(64) == doctest::Approx(expect));
  CHECK(p.center_prob(2) == 1.0);  // clamped
  CHECK(p.sk_prob(100, 1) == 1.0);
  double expect_sk = 8.0 * 9.0 * std::log(100.0) / 4096.0;
  CHECK(p.sk_prob(100, 4096) == doctest::Approx(expect_sk));
  CHECK(p.k_max(64) >= 1);
  // k_count counts powers of two up to k_max.
  int cnt = 0;
  for (long long k = 1; k <= p.k_max(500); k *= 2) ++cnt;
  CHECK(p.k_count(500) == cnt);
}

TEST_CASE("clustering with every node a center") {
  Graph g = generate_graph(GraphKind::Complete, {.n = 5}, 0);
  auto cl = cluster(g, forced({0, 1, 2, 3, 4}), 1);
  CHECK(cl.centers == std::vector<int>{0, 1, 2, 3, 4});
  for (int v = 0; v < 5; ++v) CHECK(cl.cluster_of[v] == v);
  CHECK(cl.h0.empty());  // a center belongs to its own cluster; no join edges
}

TEST_CASE("star hub as single center clusters all leaves") {
  Graph g = generate_graph(GraphKind::Star, {.n = 6}, 0);  // hub 0
  auto cl = cluster(g, forced({0}), 1);
  for (int v = 0; v < 6; ++v) CHECK(cl.cluster_of[v] == 0);
  CHECK(cl.h0.size() == 5);  // each leaf joins through its hub edge
}

TEST_CASE("unclustered node adds its full star") {
  // P4 with only center 0: nodes 2 and 3 have no neighboring center.
  Graph g = generate_graph(GraphKind::Path, {.n = 4}, 0);
  auto cl = cluster(g, forced({0}), 1);
  CHECK(cl.cluster_of[0] == 0);
  CHECK(cl.cluster_of[1] == 0);
  CHECK(cl.cluster_of[2] == -1);
  CHECK(cl.cluster_of[3] == -1);
  // Unclustered stars cover 1-2, 2-3; join edge covers 0-1.
  CHECK(cl.h0 == std::set<Edge>{{0, 1}, {1, 2}, {2, 3}});
}

TEST_CASE("node with several neighboring centers joins the smallest id") {
  Graph g = generate_graph(GraphKind::Complete, {.n = 4}, 0);
  auto cl = cluster(g, forced({1, 2}), 1);
  CHECK(cl.cluster_of[0] == 1);
  CHECK(cl.cluster_of[3] == 1);
  CHECK(cl.h0 == std::set<Edge>{{0, 1}, {1, 3}});
}

TEST_CASE("missing_edge_weights marks h0 edges free") {
  Graph g = generate_graph(GraphKind::Path, {.n = 4}, 0);
  Graph m = missing_edge_weights(g, {{0, 1}, {2, 3}});
  CHECK(m.edge_weight(0, 1) == 0);
  CHECK(m.edge_weight(1, 2) == 1);
  CHECK(m.edge_weight(2, 3) == 0);
  // Lightest shortest path weight = missing edges along it.
  auto t = sequential_wbfs_tree(m, 0);
  CHECK(t.dist[3] == 3);
  CHECK(t.weight[3] == 1);
}

TEST_CASE("missing-count semantics on the diamond, checked by brute force") {
  Graph g = make_graph(4, 1, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  std::set<Edge> h0{{0, 1}, {1, 3}};
  Graph m = missing_edge_weights(g, h0);
  auto [len, missing] = verify::brute_lightest_shortest(m, 0, 3);
  CHECK(len == 2);
  CHECK(missing == 0);  // the 0-1-3 route is fully inside h0
  auto t = sequential_wbfs_tree(m, 0);
  CHECK(t.weight[3] == 0);
}

TEST_CASE("sequential: no centers buys nothing and keeps every edge") {
  Graph g = assign_random_weights(
      generate_graph(GraphKind::Gnp, {.n = 20, .p = 0.3}, 2), 20, 2);
  auto res = sequential_6ap(g, forced({}), 5);
  CHECK(res.centers.empty());
  CHECK(res.decisions.empty());
  std::set<Edge> all;
  for (int u = 0; u < g.n; ++u)
    for (auto& [v, w] : g.adj[u])
      if (u < v) all.insert({u, v});
  CHECK(res.h == all);
}

TEST_CASE("sequential: star with hub center needs no bought paths") {
  Graph g = generate_graph(GraphKind::Star, {.n = 8}, 0);
  auto res = sequential_6ap(g, forced({0}), 5);
  CHECK(res.h == res.h0);
  for (auto& [e, label] : res.provenance) CHECK(label != EdgeLabel::BoughtPath);
}

TEST_CASE("sequential: output is a valid low-stretch subgraph") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    int n = 40 + static_cast<int>(seed) * 15;
    Graph g = generate_graph(GraphKind::Gnp, {.n = n, .p = 0.15}, seed);
    auto res = sequential_6ap(g, {}, seed);
    CHECK(h_subset_of_g(g, res.h));
    for (const Edge& e : res.h0) CHECK(res.h.count(e) == 1);
    auto report = verify::check_stretch(g, res.h, 6);
    CHECK(report.pass(6));
  }
}

TEST_CASE("sequential: per-k stats line up with decisions") {
  Graph g = generate_graph(GraphKind::Gnp, {.n = 100, .p = 0.1}, 3);
  auto res = sequential_6ap(g, {}, 3);
  PathBuyParams p;
  REQUIRE(static_cast<int>(res.per_k.size()) == p.k_count(100));
  REQUIRE(res.sk_members.size() == res.per_k.size());
  for (std::size_t i = 0; i < res.per_k.size(); ++i) {
    CHECK(res.per_k[i].k == (1LL << i));
    CHECK(res.per_k[i].sk_size ==
          static_cast<int>(res.sk_members[i].size()));
    int bought = 0;
    for (auto& d : res.decisions)
      if (d.k == res.per_k[i].k) ++bought;
    CHECK(res.per_k[i].paths_bought == bought);
    // S_k members are centers.
    for (int cj : res.sk_members[i])
      CHECK(std::binary_search(res.centers.begin(), res.centers.end(), cj));
  }
}

TEST_CASE("distributed: empty center set keeps every edge") {
  Graph g = generate_graph(GraphKind::Gnp, {.n = 15, .p = 0.3}, 1);
  auto [res, trace] = distributed_6ap(g, forced({}), 1);
  std::set<Edge> all;
  for (int u = 0; u < g.n; ++u)
    for (auto& [v, w] : g.adj[u])
      if (u < v) all.insert({u, v});
  CHECK(res.h == all);
}

TEST_CASE("distributed leader BFS computes a correct eccentricity bound") {
  SUBCASE("K4") {
    Graph g = generate_graph(GraphKind::Complete, {.n = 4}, 0);
    auto [res, trace] = distributed_6ap(g, forced({0, 1, 2, 3}), 1);
    CHECK(res.dprime == 2);  // 2 * ecc(leader) with ecc = 1
  }
  SUBCASE("P5 from an end") {
    Graph g = generate_graph(GraphKind::Path, {.n = 5}, 0);
    auto [res, trace] = distributed_6ap(g, forced({0}), 1);
    CHECK(res.dprime == 8);  // leader 0 sits at one end: ecc = 4
  }
  SUBCASE("cycle9") {
    Graph g = generate_graph(GraphKind::Cycle, {.n = 9}, 0);
    auto [res, trace] = distributed_6ap(g, forced({0, 4}), 1);
    CHECK(res.dprime == 8);
    CHECK(res.dprime >= diameter(g));
    CHECK(res.dprime <= 2 * diameter(g));
  }
}

TEST_CASE("distributed matches sequential on the forced diamond") {
  Graph g = generate_graph(GraphKind::Gnp, {.n = 4, .p = 0.9}, 2);
  auto params = forced({0, 3});
  auto seq = sequential_6ap(g, params, 7);
  auto [dist, trace] = distributed_6ap(g, params, 7);
  CHECK(dist.h == seq.h);
  CHECK(dist.h0 == seq.h0);
  CHECK(dist.centers == seq.centers);
  CHECK(dist.decisions == seq.decisions);
}

TEST_CASE("seed-aligned runs agree on sampling and decisions") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    Graph g = generate_graph(GraphKind::Gnp, {.n = 48, .p = 0.2}, seed);
    auto seq = sequential_6ap(g, {}, seed);
    auto [dist, trace] = distributed_6ap(g, {}, seed);
    CHECK(dist.centers == seq.centers);
    CHECK(dist.h0 == seq.h0);
    CHECK(dist.sk_members == seq.sk_members);
    CHECK(dist.decisions == seq.decisions);
    CHECK(dist.rounds > 0);
    CHECK(verify::check_stretch(g, dist.h, 6).pass(6));
  }
}

TEST_CASE("distributed output is contained in g and contains h0") {
  Graph g = generate_graph(GraphKind::Gnp, {.n = 60, .p = 0.12}, 21);
  auto [res, trace] = distributed_6ap(g, {}, 21);
  CHECK(h_subset_of_g(g, res.h));
  for (const Edge& e : res.h0) CHECK(res.h.count(e) == 1);
  for (auto& [e, label] : res.provenance) CHECK(res.h.count(e) == 1);
  CHECK(res.provenance.size() == res.h.size());
}

TEST_CASE("distributed run respects the bandwidth budget") {
  Graph g = generate_graph(GraphKind::Gnp, {.n = 40, .p = 0.2}, 30);
  SimConfig cfg;
  cfg.bandwidth_check = true;
  CHECK_NOTHROW(distributed_6ap(g, {}, 30, cfg));
}
