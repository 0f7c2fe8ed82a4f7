#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace congest {

using Weight = long long;

// Simple connected undirected graph with non-negative integer edge weights.
// Node ids are exactly 0..n-1; adjacency lists are sorted by neighbor id and
// symmetric.
struct Graph {
  int n = 0;
  Weight max_weight = 1;  // declared bound W; every weight is in {0,...,W}
  std::vector<std::vector<std::pair<int, Weight>>> adj;

  int edge_count() const;
  bool has_edge(int u, int v) const;
  // Throws std::out_of_range if the edge is absent.
  Weight edge_weight(int u, int v) const;

  // Checks all invariants (simplicity, symmetry, connectivity, weight bounds).
  // Throws std::invalid_argument on the first violation.
  void validate() const;
};

// Builds a graph from an unordered list of (u, v, w) edges.
Graph make_graph(int n, Weight max_weight,
                 const std::vector<std::tuple<int, int, Weight>>& edges);

enum class GraphKind { Gnp, Path, Cycle, Complete, Grid, Star };

struct GenParams {
  int n = 0;        // node count (for grid: rows * cols)
  double p = 0.0;   // gnp edge probability, must be in (0, 1]
  int rows = 0;     // grid only
  int cols = 0;     // grid only
};

// Deterministic generators; all weights are 1. For gnp, if the sample is
// disconnected the cycle 0-1-...-(n-1)-0 edges absent from the sample are
// added; *repaired reports whether that happened.
Graph generate_graph(GraphKind kind, const GenParams& params,
                     std::uint64_t seed, bool* repaired = nullptr);

// Same topology, each weight redrawn uniformly from {1,...,max_weight}.
Graph assign_random_weights(const Graph& g, Weight max_weight,
                            std::uint64_t seed);

std::vector<int> bfs_distances(const Graph& g, int source);
int diameter(const Graph& g);

// A weighted BFS tree: shortest-path tree in which every root-to-node path is
// additionally the lightest among all shortest paths.
struct WbfsTree {
  int source = -1;
  std::vector<int> parent;  // parent[source] == source (root sentinel)
  std::vector<int> dist;
  std::vector<Weight> weight;
};

// Sequential reference construction: processes nodes in non-decreasing BFS
// distance; ties among parents achieving the minimal weight break to the
// smallest parent id.
WbfsTree sequential_wbfs_tree(const Graph& g, int source);

struct GraphFormatError : std::runtime_error {
  int line;
  GraphFormatError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

// Edge-list format: first line "n m W", then m lines "u v w" with
// 0 <= u < v < n and 0 <= w <= W; '#' starts a comment line.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);
void save_graph(const Graph& g, std::ostream& out);
void save_graph_file(const Graph& g, const std::string& path);

}  // namespace congest
