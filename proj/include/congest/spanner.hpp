#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "congest/graph.hpp"
#include "congest/sim.hpp"

namespace congest {

using Edge = std::pair<int, int>;  // normalized u < v

inline Edge make_edge(int u, int v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

// Sampling parameters of the clustering + path-buying construction. All
// logarithms are natural; probabilities clamp to [0, 1].
struct PathBuyParams {
  double c = 3.0;
  // Test hook: overrides random center sampling in both modes.
  std::optional<std::vector<int>> forced_centers;

  double center_prob(int n) const {
    return std::min(1.0, c / (std::cbrt(static_cast<double>(n)) *
                              std::cbrt(std::log(static_cast<double>(n)))));
  }
  double sk_prob(int n, long long k) const {
    return std::min(1.0, 8.0 * c * c * std::log(static_cast<double>(n)) /
                             static_cast<double>(k));
  }
  long long k_max(int n) const {
    double v = 8.0 * c * std::pow(static_cast<double>(n), 2.0 / 3.0) /
               std::cbrt(std::log(static_cast<double>(n)));
    return std::max<long long>(1, static_cast<long long>(v));
  }
  // Number of powers of two 1, 2, 4, ... <= k_max.
  int k_count(int n) const {
    int c_ = 0;
    for (long long k = 1; k <= k_max(n); k *= 2) ++c_;
    return c_;
  }
};

struct Clustering {
  std::vector<int> centers;     // ascending
  std::vector<int> cluster_of;  // center id, or -1 if unclustered
  std::set<Edge> h0;
};

// Center sampling plus cluster joining: each node with a neighboring center
// joins the smallest-id one; nodes with none contribute their full star.
Clustering cluster(const Graph& g, const PathBuyParams& params,
                   std::uint64_t seed);

// Same topology with weight 0 on h0 edges and 1 elsewhere, so the weight of
// a lightest shortest path equals its missing-edge count.
Graph missing_edge_weights(const Graph& g, const std::set<Edge>& h0);

enum class EdgeLabel { ClusterEdge, UnclusteredStar, BoughtPath };

struct PerKStats {
  long long k = 0;
  int sk_size = 0;
  int paths_bought = 0;
};

// One bought path decision: at scale k, for tree source c_i, the center c_j
// chose endpoint v.
struct BuyDecision {
  long long k;
  int ci, cj, v;
  auto operator<=>(const BuyDecision&) const = default;
};

struct SpannerResult {
  std::set<Edge> h;
  std::map<Edge, EdgeLabel> provenance;
  std::set<Edge> h0;
  std::vector<int> centers;
  std::vector<PerKStats> per_k;
  std::vector<std::vector<int>> sk_members;  // aligned with per_k
  std::vector<BuyDecision> decisions;
  int rounds = 0;   // 0 in sequential mode
  int dprime = -1;  // diameter upper bound computed in distributed mode
};

// Sequential reference implementation of the clustering + path-buying
// template.
SpannerResult sequential_6ap(const Graph& g, const PathBuyParams& params,
                             std::uint64_t seed);

// Full distributed implementation on top of the simulation engine: clustering,
// leader BFS setup (D' and |C| broadcast), WBFS over 0/1 weights, pipelined
// reports to centers, local path buying, and the reversed-replay buy phase.
std::pair<SpannerResult, Trace> distributed_6ap(const Graph& g,
                                                const PathBuyParams& params,
                                                std::uint64_t seed,
                                                SimConfig config = {});

}  // namespace congest
