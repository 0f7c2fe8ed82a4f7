#include "congest/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

#include "congest/rng.hpp"

namespace congest {

int Graph::edge_count() const {
  std::size_t deg = 0;
  for (const auto& a : adj) deg += a.size();
  return static_cast<int>(deg / 2);
}

bool Graph::has_edge(int u, int v) const {
  const auto& a = adj[u];
  auto it = std::lower_bound(a.begin(), a.end(), v,
                             [](const auto& e, int x) { return e.first < x; });
  return it != a.end() && it->first == v;
}

Weight Graph::edge_weight(int u, int v) const {
  const auto& a = adj[u];
  auto it = std::lower_bound(a.begin(), a.end(), v,
                             [](const auto& e, int x) { return e.first < x; });
  if (it == a.end() || it->first != v)
    throw std::out_of_range("no edge " + std::to_string(u) + "-" +
                            std::to_string(v));
  return it->second;
}

void Graph::validate() const {
  if (n < 2) throw std::invalid_argument("graph must have n >= 2");
  if (static_cast<int>(adj.size()) != n)
    throw std::invalid_argument("adjacency size does not match n");
  if (max_weight < 0) throw std::invalid_argument("negative weight bound");
  for (int u = 0; u < n; ++u) {
    int prev = -1;
    for (const auto& [v, w] : adj[u]) {
      if (v < 0 || v >= n)
        throw std::invalid_argument("neighbor id out of range at node " +
                                    std::to_string(u));
      if (v == u)
        throw std::invalid_argument("self-loop at node " + std::to_string(u));
      if (v <= prev)
        throw std::invalid_argument("adjacency not sorted/simple at node " +
                                    std::to_string(u));
      prev = v;
      if (w < 0 || w > max_weight)
        throw std::invalid_argument("weight out of range on edge " +
                                    std::to_string(u) + "-" +
                                    std::to_string(v));
    }
  }
  for (int u = 0; u < n; ++u)
    for (const auto& [v, w] : adj[u]) {
      if (!has_edge(v, u) || edge_weight(v, u) != w)
        throw std::invalid_argument("asymmetric edge " + std::to_string(u) +
                                    "-" + std::to_string(v));
    }
  // Connectivity.
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const auto& [v, w] : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
  }
  if (count != n) throw std::invalid_argument("graph is disconnected");
}

Graph make_graph(int n, Weight max_weight,
                 const std::vector<std::tuple<int, int, Weight>>& edges) {
  Graph g;
  g.n = n;
  g.max_weight = max_weight;
  g.adj.assign(n, {});
  for (const auto& [u, v, w] : edges) {
    g.adj[u].emplace_back(v, w);
    g.adj[v].emplace_back(u, w);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

namespace {

bool connected(int n, const std::vector<std::vector<int>>& nbr) {
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : nbr[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
  }
  return count == n;
}

}  // namespace

Graph generate_graph(GraphKind kind, const GenParams& params,
                     std::uint64_t seed, bool* repaired) {
  if (repaired) *repaired = false;
  std::vector<std::tuple<int, int, Weight>> edges;
  int n = params.n;
  switch (kind) {
    case GraphKind::Path:
      if (n < 2) throw std::invalid_argument("path needs n >= 2");
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, 1);
      break;
    case GraphKind::Cycle:
      if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n, 1);
      break;
    case GraphKind::Complete:
      if (n < 2) throw std::invalid_argument("complete needs n >= 2");
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v, 1);
      break;
    case GraphKind::Star:
      if (n < 2) throw std::invalid_argument("star needs n >= 2");
      for (int v = 1; v < n; ++v) edges.emplace_back(0, v, 1);
      break;
    case GraphKind::Grid: {
      int rows = params.rows, cols = params.cols;
      if (rows < 1 || cols < 1 || rows * cols < 2)
        throw std::invalid_argument("grid needs rows*cols >= 2");
      n = rows * cols;
      auto id = [cols](int r, int c) { return r * cols + c; };
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1), 1);
          if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c), 1);
        }
      break;
    }
    case GraphKind::Gnp: {
      if (n < 2) throw std::invalid_argument("gnp needs n >= 2");
      if (!(params.p > 0.0 && params.p <= 1.0))
        throw std::invalid_argument("gnp probability must be in (0,1]");
      SplitMix64 rng(derive_seed(seed, 0x67'6e'70 /*"gnp"*/));
      std::vector<std::vector<int>> nbr(n);
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (rng.bernoulli(params.p)) {
            edges.emplace_back(u, v, 1);
            nbr[u].push_back(v);
            nbr[v].push_back(u);
          }
      if (!connected(n, nbr)) {
        if (repaired) *repaired = true;
        std::vector<std::vector<char>> have(n, std::vector<char>(n, 0));
        for (const auto& [u, v, w] : edges) have[u][v] = have[v][u] = 1;
        for (int i = 0; i < n; ++i) {
          int u = i, v = (i + 1) % n;
          if (!have[u][v]) edges.emplace_back(std::min(u, v), std::max(u, v), 1);
        }
      }
      break;
    }
  }
  Graph g = make_graph(n, 1, edges);
  g.validate();
  return g;
}

Graph assign_random_weights(const Graph& g, Weight max_weight,
                            std::uint64_t seed) {
  if (max_weight < 1) throw std::invalid_argument("max_weight must be >= 1");
  Graph out = g;
  out.max_weight = max_weight;
  for (int u = 0; u < g.n; ++u)
    for (auto& [v, w] : out.adj[u])
      if (u < v) {
        SplitMix64 rng(derive_seed(seed, 0x77 /*'w'*/, u, v));
        w = rng.uniform(1, max_weight);
      }
  // Mirror the u<v draws onto the v>u direction.
  for (int u = 0; u < g.n; ++u)
    for (auto& [v, w] : out.adj[u])
      if (u > v) w = out.edge_weight(v, u);
  return out;
}

std::vector<int> bfs_distances(const Graph& g, int source) {
  if (source < 0 || source >= g.n)
    throw std::invalid_argument("source out of range");
  std::vector<int> dist(g.n, -1);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const auto& [v, w] : g.adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

int diameter(const Graph& g) {
  int d = 0;
  for (int s = 0; s < g.n; ++s) {
    auto dist = bfs_distances(g, s);
    for (int x : dist) d = std::max(d, x);
  }
  return d;
}

WbfsTree sequential_wbfs_tree(const Graph& g, int source) {
  auto dist = bfs_distances(g, source);
  WbfsTree t;
  t.source = source;
  t.dist = dist;
  t.parent.assign(g.n, -1);
  t.weight.assign(g.n, 0);
  t.parent[source] = source;
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
  });
  for (int v : order) {
    if (v == source) continue;
    int best_parent = -1;
    Weight best_w = 0;
    for (const auto& [u, w] : g.adj[v]) {
      if (dist[u] != dist[v] - 1) continue;
      Weight cand = t.weight[u] + w;
      if (best_parent < 0 || cand < best_w) {
        best_parent = u;
        best_w = cand;
      }
    }
    t.parent[v] = best_parent;
    t.weight[v] = best_w;
  }
  return t;
}

Graph load_graph(std::istream& in) {
  std::string raw;
  int lineno = 0;
  long long n = -1, m = -1;
  Weight W = -1;
  std::vector<std::tuple<int, int, Weight>> edges;
  long long seen = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos)
      line.resize(pos);
    std::istringstream ls(line);
    if (!header) {
      if (!(ls >> n >> m >> W)) {
        std::string tok;
        std::istringstream probe(line);
        if (probe >> tok)
          throw GraphFormatError(lineno, "expected header 'n m W'");
        continue;  // blank/comment line before header
      }
      std::string extra;
      if (ls >> extra) throw GraphFormatError(lineno, "trailing tokens in header");
      if (n < 2) throw GraphFormatError(lineno, "n must be >= 2");
      if (m < 0) throw GraphFormatError(lineno, "m must be >= 0");
      if (W < 0) throw GraphFormatError(lineno, "W must be >= 0");
      header = true;
      continue;
    }
    long long u, v;
    Weight w;
    if (!(ls >> u >> v >> w)) {
      std::string tok;
      std::istringstream probe(line);
      if (probe >> tok) throw GraphFormatError(lineno, "expected 'u v w'");
      continue;
    }
    std::string extra;
    if (ls >> extra) throw GraphFormatError(lineno, "trailing tokens on edge line");
    if (seen == m) throw GraphFormatError(lineno, "more than m edge lines");
    if (!(0 <= u && u < v && v < n))
      throw GraphFormatError(lineno, "edge endpoints must satisfy 0 <= u < v < n");
    if (w < 0 || w > W) throw GraphFormatError(lineno, "edge weight out of range");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v), w);
    ++seen;
  }
  if (!header) throw GraphFormatError(lineno, "missing header 'n m W'");
  if (seen != m) throw GraphFormatError(lineno, "expected m edge lines");
  Graph g = make_graph(static_cast<int>(n), W, edges);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw GraphFormatError(lineno, e.what());
  }
  return g;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return load_graph(in);
}

void save_graph(const Graph& g, std::ostream& out) {
  out << g.n << ' ' << g.edge_count() << ' ' << g.max_weight << '\n';
  for (int u = 0; u < g.n; ++u)
    for (const auto& [v, w] : g.adj[u])
      if (u < v) out << u << ' ' << v << ' ' << w << '\n';
}

void save_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  save_graph(g, out);
}

}  // namespace congest
