#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "congest/graph.hpp"
#include "congest/wbfs.hpp"

namespace congest::verify {

using Edge = std::pair<int, int>;  // normalized u < v

struct Violation {
  std::string kind;  // "distance", "weight", "stretch", "detection", "invariant"
  int node = -1;
  int other = -1;
  long long expected = 0;
  long long actual = 0;
  std::string detail;
};

void write_jsonl(const std::vector<Violation>& violations, std::ostream& out);

// All-pairs lightest-shortest-path oracle via Floyd-Warshall over the
// lexicographic (length, weight) min-plus semiring. Deliberately a different
// strategy than the per-source searches it is used to validate.
class LexAllPairs {
 public:
  static LexAllPairs compute(const Graph& g);
  int dist(int u, int v) const { return d_[u * n_ + v]; }
  Weight weight(int u, int v) const { return w_[u * n_ + v]; }

 private:
  int n_ = 0;
  std::vector<int> d_;
  std::vector<Weight> w_;
};

// Exhaustive simple-path enumeration; returns (min length, min weight among
// min-length paths). Only for n <= 12 and path length <= 12.
std::pair<int, Weight> brute_lightest_shortest(const Graph& g, int u, int v);

// Definition-1 check: distances against an independent BFS, weights against
// LexAllPairs, parent-pointer consistency; for n <= 12 weights are also
// cross-checked by exhaustive path enumeration.
std::vector<Violation> check_wbfs_tree(const Graph& g, const WbfsTree& tree);

struct StretchReport {
  bool disconnected = false;
  long long max_excess = 0;  // max over pairs of dist_H - dist_G
  Edge worst = {-1, -1};
  bool pass(int beta) const { return !disconnected && max_excess <= beta; }
};

// Exact all-pairs BFS on g and on the subgraph h.
StretchReport check_stretch(const Graph& g, const std::set<Edge>& h, int beta);

// Recomputes the truncated proximity lists from the oracle and compares the
// (d, s, w) lists exactly.
std::vector<Violation> check_detection(const Graph& g,
                                       const std::vector<int>& sources, int d,
                                       int k, const DetectionAnswer& answer);

// Fraction of ordered node pairs (s, t), s != t, whose lightest shortest path
// is unique. Exact: follows the optimal-parent chain; a node with two optimal
// parents on the chain means the path is not unique.
double unique_lightest_fraction(const Graph& g);

// Exhaustive uniqueness count for small graphs (n <= 12).
double unique_lightest_fraction_brute(const Graph& g);

}  // namespace congest::verify
