#include "congest/verify.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <ostream>

namespace congest::verify {

namespace {

constexpr int kInfDist = std::numeric_limits<int>::max() / 4;
constexpr Weight kInfWeight = std::numeric_limits<Weight>::max() / 4;

// Plain BFS, written here so verify shares no code with graph_core.
std::vector<int> own_bfs(int n,
                         const std::vector<std::vector<int>>& nbr,
                         int source) {
  std::vector<int> dist(n, kInfDist);
  std::deque<int> q{source};
  dist[source] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : nbr[u])
      if (dist[v] == kInfDist) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return dist;
}

std::vector<std::vector<int>> plain_adjacency(const Graph& g) {
  std::vector<std::vector<int>> nbr(g.n);
  for (int u = 0; u < g.n; ++u)
    for (const auto& [v, w] : g.adj[u]) nbr[u].push_back(v);
  return nbr;
}

}  // namespace

void write_jsonl(const std::vector<Violation>& violations, std::ostream& out) {
  for (const auto& v : violations)
    out << "{\"kind\":\"" << v.kind << "\",\"node\":" << v.node
        << ",\"other\":" << v.other << ",\"expected\":" << v.expected
        << ",\"actual\":" << v.actual << ",\"detail\":\"" << v.detail
        << "\"}\n";
}

LexAllPairs LexAllPairs::compute(const Graph& g) {
  LexAllPairs r;
  r.n_ = g.n;
  r.d_.assign(static_cast<std::size_t>(g.n) * g.n, kInfDist);
  r.w_.assign(static_cast<std::size_t>(g.n) * g.n, kInfWeight);
  for (int u = 0; u < g.n; ++u) {
    r.d_[u * g.n + u] = 0;
    r.w_[u * g.n + u] = 0;
    for (const auto& [v, w] : g.adj[u]) {
      r.d_[u * g.n + v] = 1;
      r.w_[u * g.n + v] = w;
    }
  }
  for (int k = 0; k < g.n; ++k)
    for (int i = 0; i < g.n; ++i) {
      int dik = r.d_[i * g.n + k];
      if (dik >= kInfDist) continue;
      Weight wik = r.w_[i * g.n + k];
      for (int j = 0; j < g.n; ++j) {
        int cand_d = dik + r.d_[k * g.n + j];
        if (cand_d >= kInfDist) continue;
        Weight cand_w = wik + r.w_[k * g.n + j];
        int& dj = r.d_[i * g.n + j];
        Weight& wj = r.w_[i * g.n + j];
        if (cand_d < dj || (cand_d == dj && cand_w < wj)) {
          dj = cand_d;
          wj = cand_w;
        }
      }
    }
  return r;
}

std::pair<int, Weight> brute_lightest_shortest(const Graph& g, int u, int v) {
  if (g.n > 12) throw std::invalid_argument("brute oracle capped at n = 12");
  int best_d = kInfDist;
  Weight best_w = kInfWeight;
  std::vector<char> used(g.n, 0);
  // DFS over all simple paths of length <= 12.
  auto dfs = [&](auto&& self, int at, int len, Weight wsum) -> void {
    if (at == v) {
      if (len < best_d || (len == best_d && wsum < best_w)) {
        best_d = len;
        best_w = wsum;
      }
      return;
    }
    if (len >= 12) return;
    for (const auto& [x, w] : g.adj[at])
      if (!used[x]) {
        used[x] = 1;
        self(self, x, len + 1, wsum + w);
        used[x] = 0;
      }
  };
  used[u] = 1;
  dfs(dfs, u, 0, 0);
  return {best_d, best_w};
}

std::vector<Violation> check_wbfs_tree(const Graph& g, const WbfsTree& tree) {
  std::vector<Violation> out;
  if (tree.source < 0 || tree.source >= g.n)
    throw std::invalid_argument("tree source out of range");
  auto nbr = plain_adjacency(g);
  auto dist = own_bfs(g.n, nbr, tree.source);
  auto lex = LexAllPairs::compute(g);
  for (int v = 0; v < g.n; ++v) {
    if (tree.dist[v] != dist[v])
      out.push_back({"distance", v, tree.source, dist[v], tree.dist[v],
                     "tree distance differs from BFS"});
    if (tree.weight[v] != lex.weight(tree.source, v))
      out.push_back({"weight", v, tree.source, lex.weight(tree.source, v),
                     tree.weight[v], "tree weight is not the lightest"});
    if (g.n <= 12) {
      auto [bd, bw] = brute_lightest_shortest(g, tree.source, v);
      if (tree.dist[v] != bd || tree.weight[v] != bw)
        out.push_back({"weight", v, tree.source, bw, tree.weight[v],
                       "exhaustive enumeration disagrees"});
    }
    // Parent-walk consistency: reaching the source in dist[v] steps with
    // accumulated weight weight[v].
    int at = v, steps = 0;
    Weight acc = 0;
    bool broken = false;
    while (at != tree.source && steps <= g.n) {
      int p = tree.parent[at];
      if (p < 0 || p >= g.n || !g.has_edge(p, at)) {
        broken = true;
        break;
      }
      acc += g.edge_weight(p, at);
      at = p;
      ++steps;
    }
    if (broken || at != tree.source || steps != dist[v] || acc != tree.weight[v])
      out.push_back({"distance", v, tree.source, dist[v], steps,
                     "parent-pointer walk does not realize (dist, weight)"});
  }
  return out;
}

StretchReport check_stretch(const Graph& g, const std::set<Edge>& h,
                            int beta) {
  for (const auto& [u, v] : h)
    if (!g.has_edge(u, v))
      throw std::invalid_argument("spanner edge not in the host graph");
  std::vector<std::vector<int>> gn = plain_adjacency(g), hn(g.n);
  for (const auto& [u, v] : h) {
    hn[u].push_back(v);
    hn[v].push_back(u);
  }
  StretchReport rep;
  for (int s = 0; s < g.n; ++s) {
    auto dg = own_bfs(g.n, gn, s);
    auto dh = own_bfs(g.n, hn, s);
    for (int t = 0; t < g.n; ++t) {
      if (dh[t] >= kInfDist) {
        rep.disconnected = true;
        rep.worst = {s, t};
        return rep;
      }
      long long excess = static_cast<long long>(dh[t]) - dg[t];
      if (excess > rep.max_excess) {
        rep.max_excess = excess;
        rep.worst = {s, t};
      }
    }
  }
  (void)beta;
  return rep;
}

std::vector<Violation> check_detection(const Graph& g,
                                       const std::vector<int>& sources, int d,
                                       int k, const DetectionAnswer& answer) {
  std::vector<Violation> out;
  auto lex = LexAllPairs::compute(g);
  std::vector<int> srt(sources);
  std::sort(srt.begin(), srt.end());
  for (int v = 0; v < g.n; ++v) {
    // True truncated list: entries (dist, s, weight) with dist <= d, sorted
    // by (dist, s), first min{k, lambda} of them.
    std::vector<Triplet> expect;
    for (int s : srt)
      if (lex.dist(s, v) <= d)
        expect.push_back({lex.dist(s, v), s, lex.weight(s, v)});
    std::sort(expect.begin(), expect.end());
    if (static_cast<int>(expect.size()) > k) expect.resize(k);
    const auto& got = answer[v];
    bool equal = got.size() == expect.size();
    for (std::size_t i = 0; equal && i < got.size(); ++i)
      equal = got[i].t == expect[i];
    if (!equal)
      out.push_back({"detection", v, -1,
                     static_cast<long long>(expect.size()),
                     static_cast<long long>(got.size()),
                     "truncated list differs from oracle"});
  }
  return out;
}

double unique_lightest_fraction(const Graph& g) {
  auto nbr = plain_adjacency(g);
  long long unique = 0, total = 0;
  for (int s = 0; s < g.n; ++s) {
    auto dist = own_bfs(g.n, nbr, s);
    // Layered DP for lightest-shortest weights and optimal-parent counts.
    std::vector<Weight> wmin(g.n, kInfWeight);
    wmin[s] = 0;
    std::vector<int> order(g.n);
    for (int i = 0; i < g.n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return dist[a] < dist[b]; });
    std::vector<std::vector<int>> opt_parent(g.n);
    for (int v : order) {
      if (v == s) continue;
      for (int u : nbr[v]) {
        if (dist[u] != dist[v] - 1) continue;
        Weight cand = wmin[u] + g.edge_weight(u, v);
        if (cand < wmin[v]) {
          wmin[v] = cand;
          opt_parent[v] = {u};
        } else if (cand == wmin[v]) {
          opt_parent[v].push_back(u);
        }
      }
    }
    for (int t = 0; t < g.n; ++t) {
      if (t == s) continue;
      ++total;
      int at = t;
      bool uniq = true;
      while (at != s) {
        if (opt_parent[at].size() != 1) {
          uniq = false;
          break;
        }
        at = opt_parent[at][0];
      }
      if (uniq) ++unique;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(unique) / total;
}

double unique_lightest_fraction_brute(const Graph& g) {
  if (g.n > 12) throw std::invalid_argument("brute oracle capped at n = 12");
  long long unique = 0, total = 0;
  std::vector<char> used(g.n, 0);
  for (int s = 0; s < g.n; ++s)
    for (int t = 0; t < g.n; ++t) {
      if (s == t) continue;
      ++total;
      auto [bd, bw] = brute_lightest_shortest(g, s, t);
      long long count = 0;
      auto dfs = [&](auto&& self, int at, int len, Weight wsum) -> void {
        if (len > bd || wsum > bw) return;
        if (at == t) {
          if (len == bd && wsum == bw) ++count;
          return;
        }
        for (const auto& [x, w] : g.adj[at])
          if (!used[x]) {
            used[x] = 1;
            self(self, x, len + 1, wsum + w);
            used[x] = 0;
          }
      };
      std::fill(used.begin(), used.end(), 0);
      used[s] = 1;
      dfs(dfs, s, 0, 0);
      if (count == 1) ++unique;
    }
  return total == 0 ? 1.0 : static_cast<double>(unique) / total;
}

}  // namespace congest::verify
