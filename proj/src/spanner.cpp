#include "congest/spanner.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "congest/rng.hpp"
#include "congest/wbfs.hpp"

namespace congest {

namespace {

constexpr std::uint64_t kCenterCoin = 0xC3;
constexpr std::uint64_t kSkCoin = 0x5B;

bool center_coin(const PathBuyParams& params, std::uint64_t seed, int n,
                 int node) {
  if (params.forced_centers) {
    const auto& f = *params.forced_centers;
    return std::find(f.begin(), f.end(), node) != f.end();
  }
  SplitMix64 rng(derive_seed(seed, kCenterCoin, node));
  return rng.bernoulli(params.center_prob(n));
}

bool sk_coin(const PathBuyParams& params, std::uint64_t seed, int n,
             int center, long long k) {
  SplitMix64 rng(derive_seed(seed, kSkCoin, center, k));
  return rng.bernoulli(params.sk_prob(n, k));
}

}  // namespace

Clustering cluster(const Graph& g, const PathBuyParams& params,
                   std::uint64_t seed) {
  if (g.n < 2) throw std::invalid_argument("clustering needs n >= 2");
  Clustering cl;
  cl.cluster_of.assign(g.n, -1);
  std::vector<char> is_center(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    if (center_coin(params, seed, g.n, v)) {
      is_center[v] = 1;
      cl.centers.push_back(v);
      cl.cluster_of[v] = v;
    }
  for (int v = 0; v < g.n; ++v) {
    if (is_center[v]) continue;
    int chosen = -1;
    for (const auto& [u, w] : g.adj[v])
      if (is_center[u]) {
        chosen = u;  // adjacency sorted, first hit is smallest id
        break;
      }
    if (chosen >= 0) {
      cl.cluster_of[v] = chosen;
      cl.h0.insert(make_edge(v, chosen));
    } else {
      for (const auto& [u, w] : g.adj[v]) cl.h0.insert(make_edge(v, u));
    }
  }
  return cl;
}

Graph missing_edge_weights(const Graph& g, const std::set<Edge>& h0) {
  for (const auto& [u, v] : h0)
    if (!g.has_edge(u, v))
      throw std::invalid_argument("h0 edge not present in graph");
  Graph out = g;
  out.max_weight = 1;
  for (int u = 0; u < g.n; ++u)
    for (auto& [v, w] : out.adj[u])
      w = h0.count(make_edge(u, v)) ? 0 : 1;
  return out;
}

SpannerResult sequential_6ap(const Graph& g, const PathBuyParams& params,
                             std::uint64_t seed) {
  Clustering cl = cluster(g, params, seed);
  SpannerResult res;
  res.centers = cl.centers;
  res.h0 = cl.h0;
  res.h = cl.h0;
  for (const auto& e : cl.h0) {
    bool star = cl.cluster_of[e.first] != e.second &&
                cl.cluster_of[e.second] != e.first;
    res.provenance[e] =
        star ? EdgeLabel::UnclusteredStar : EdgeLabel::ClusterEdge;
  }

  Graph gw = missing_edge_weights(g, cl.h0);
  // One WBFS tree per center, on the 0/1-marked graph; the tree weight of v
  // is the missing-edge count of its lightest shortest path from the center.
  std::map<int, WbfsTree> trees;
  for (int ci : cl.centers) trees.emplace(ci, sequential_wbfs_tree(gw, ci));

  std::map<int, std::vector<int>> members;
  for (int v = 0; v < g.n; ++v)
    if (cl.cluster_of[v] >= 0) members[cl.cluster_of[v]].push_back(v);

  for (long long k = 1; k <= params.k_max(g.n); k *= 2) {
    PerKStats stats;
    stats.k = k;
    std::vector<int> sk;
    for (int cj : cl.centers)
      if (sk_coin(params, seed, g.n, cj, k)) sk.push_back(cj);
    stats.sk_size = static_cast<int>(sk.size());
    for (int ci : cl.centers) {
      const WbfsTree& tree = trees.at(ci);
      for (int cj : sk) {
        // Candidates: members of C_j whose lightest shortest path from c_i
        // has fewer than 2k missing edges; pick the shortest, ties broken by
        // fewer missing edges then smaller endpoint id.
        int best_v = -1;
        int best_d = 0;
        Weight best_miss = 0;
        for (int v : members[cj]) {
          if (tree.weight[v] >= 2 * k) continue;
          if (best_v < 0 || tree.dist[v] < best_d ||
              (tree.dist[v] == best_d && tree.weight[v] < best_miss)) {
            best_v = v;
            best_d = tree.dist[v];
            best_miss = tree.weight[v];
          }
        }
        if (best_v < 0) continue;
        ++stats.paths_bought;
        res.decisions.push_back({k, ci, cj, best_v});
        for (int at = best_v; at != ci; at = tree.parent[at]) {
          Edge e = make_edge(at, tree.parent[at]);
          if (res.h.insert(e).second)
            res.provenance.emplace(e, EdgeLabel::BoughtPath);
        }
      }
    }
    res.per_k.push_back(stats);
    res.sk_members.push_back(std::move(sk));
  }
  std::sort(res.decisions.begin(), res.decisions.end());
  return res;
}

// ---------------------------------------------------------------------------
// Distributed implementation.
// ---------------------------------------------------------------------------

namespace {

// Announce tags.
constexpr int kTagCenter = 1;
constexpr int kTagUnclustered = 2;
constexpr int kTagJoin = 3;
constexpr int kTagBfsDist = 4;
constexpr int kTagBfsParent = 5;
constexpr int kTagSchedDprime = 6;
constexpr int kTagSchedNc = 7;
constexpr int kTagSchedStart = 8;  // value = rounds until the WBFS phase

class SpannerProgram : public NodeProgram {
 public:
  SpannerProgram(int node, const Graph& g, const PathBuyParams& params,
                 std::uint64_t global_seed)
      : node_(node),
        n_(g.n),
        params_(params),
        nbrs_(g.adj[node]),
        is_center_(center_coin(params, global_seed, g.n, node)),
        seed_(global_seed) {
    nbr_depth_.assign(g.n, -1);
    h0_nbr_.assign(g.n, 0);
    is_nbr_.assign(g.n, 0);
    for (const auto& [u, w] : nbrs_) is_nbr_[u] = 1;
    if (is_center_) cluster_of_ = node_;
  }

  // --- engine callbacks ----------------------------------------------------

  void round_begin(int r) override {
    cur_round_ = r;
    if (r == 1 && is_center_) schedule_broadcast(1, Message::announce(kTagCenter, 0));
    if (r == 2) decide_cluster();
    if (r == 3) {
      finalize_h0();
      if (node_ == 0 && depth_ < 0) {
        depth_ = 0;
        schedule_broadcast(3, Message::announce(kTagBfsDist, 0));
      }
    }
    maybe_finalize_children(r);
    maybe_send_bfs_report(r);
    if (sched_known() && r == r_dispatch_ && is_center_) build_dispatch_queue();
    if (sched_known()) {
      schedule_dispatch_send(r);
      schedule_buy_sends(r);
    }
  }

  void outgoing(int r, std::vector<std::pair<int, Message>>& out) const override {
    auto it = outbox_.find(r);
    if (it != outbox_.end())
      out.insert(out.end(), it->second.begin(), it->second.end());
    if (wbfs_active(r)) {
      if (auto t = core_.next_unsent()) {
        Message m = Message::triplet(*t);
        for (const auto& [v, w] : nbrs_) out.emplace_back(v, m);
      }
    }
    if (report_active(r) && cluster_of_ >= 0 && cluster_of_ != node_) {
      int idx = r - r_report_;
      const auto& es = core_.entries();
      if (idx < static_cast<int>(es.size()))
        out.emplace_back(cluster_of_, Message::report(es[idx].t.d, es[idx].t.s,
                                                      es[idx].t.w));
    }
  }

  void commit_send(int r) override {
    outbox_.erase(r);
    if (wbfs_active(r))
      if (auto t = core_.next_unsent()) core_.mark_sent(*t);
  }

  void receive(int r, int sender, const Message& msg) override {
    switch (msg.kind) {
      case MsgKind::Announce:
        on_announce(r, sender, msg);
        break;
      case MsgKind::Triplet:
        if (wbfs_active(r)) {
          Weight w = h0_nbr_[sender] ? 0 : 1;
          if (core_.accept(r - r_wbfs_ + 1, sender, w, msg.as_triplet()))
            last_accept_[msg.as_triplet().s] = {r - r_wbfs_ + 1, sender};
        }
        break;
      case MsgKind::Report:
        if (sched_known() && r >= r_report_) {
          // Member report: (d, source center, missing count).
          member_data_[{static_cast<int>(msg.f1), sender}] = {msg.f0, msg.f2};
        } else {
          // BFS convergecast: (subtree depth, 0, subtree center count).
          agg_depth_ = std::max(agg_depth_, static_cast<int>(msg.f0));
          agg_centers_ += msg.f2;
          ++reports_in_;
        }
        break;
      case MsgKind::Buy: {
        int ci = static_cast<int>(msg.f1);
        add_edge(make_edge(node_, sender), EdgeLabel::BoughtPath);
        tokens_.insert(ci);
        break;
      }
    }
  }

  bool halted() const override {
    return sched_known() && cur_round_ > r_end_;
  }

  void proximity_digest(std::vector<Triplet>& out) const override {
    core_.digest(out);
  }

  // --- result collection (outside the model) -------------------------------

  bool is_center() const { return is_center_; }
  int cluster_of() const { return cluster_of_; }
  int dprime() const { return dprime_; }
  const std::vector<std::pair<Edge, EdgeLabel>>& edges() const {
    return local_edges_;
  }
  const std::vector<std::pair<long long, char>>& sk_membership() const {
    return sk_membership_;
  }
  const std::vector<BuyDecision>& decisions() const { return decisions_; }

 private:
  bool sched_known() const { return r_wbfs_ > 0 && dprime_ >= 0 && nc_ >= 0; }
  bool wbfs_active(int r) const {
    return sched_known() && r >= r_wbfs_ && r < r_report_;
  }
  bool report_active(int r) const {
    return sched_known() && r >= r_report_ && r < r_dispatch_;
  }

  void schedule(int r, int to, Message m) {
    outbox_[r].emplace_back(to, std::move(m));
  }
  void schedule_broadcast(int r, const Message& m) {
    for (const auto& [v, w] : nbrs_) schedule(r, v, m);
  }

  void add_edge(Edge e, EdgeLabel label) { local_edges_.emplace_back(e, label); }

  void decide_cluster() {
    if (is_center_) return;
    if (!nbr_centers_.empty()) {
      cluster_of_ = nbr_centers_.front();
      add_edge(make_edge(node_, cluster_of_), EdgeLabel::ClusterEdge);
      schedule(2, cluster_of_, Message::announce(kTagJoin, 0));
    } else {
      for (const auto& [u, w] : nbrs_)
        add_edge(make_edge(node_, u), EdgeLabel::UnclusteredStar);
      schedule_broadcast(2, Message::announce(kTagUnclustered, 0));
    }
  }

  void finalize_h0() {
    if (cluster_of_ >= 0 && cluster_of_ != node_) h0_nbr_[cluster_of_] = 1;
    for (int u : joined_) h0_nbr_[u] = 1;
    if (cluster_of_ < 0)
      for (const auto& [u, w] : nbrs_) h0_nbr_[u] = 1;
    // unclustered neighbors were marked on receive
  }

  void on_announce(int r, int sender, const Message& msg) {
    switch (msg.tag) {
      case kTagCenter:
        nbr_centers_.push_back(sender);
        std::sort(nbr_centers_.begin(), nbr_centers_.end());
        break;
      case kTagUnclustered:
        h0_nbr_[sender] = 1;
        add_edge(make_edge(node_, sender), EdgeLabel::UnclusteredStar);
        break;
      case kTagJoin:
        joined_.push_back(sender);
        members_.push_back(sender);
        add_edge(make_edge(node_, sender), EdgeLabel::ClusterEdge);
        break;
      case kTagBfsDist: {
        int d = static_cast<int>(msg.f2);
        nbr_depth_[sender] = d;
        if (depth_ < 0) {
          depth_ = d + 1;
          bfs_parent_ = sender;  // ascending delivery: smallest offering id
          schedule_broadcast(r + 1, Message::announce(kTagBfsDist, depth_));
          schedule(r + 2, bfs_parent_, Message::announce(kTagBfsParent, 0));
        }
        break;
      }
      case kTagBfsParent:
        bfs_children_.push_back(sender);
        break;
      case kTagSchedDprime:
        if (dprime_ < 0) {
          dprime_ = static_cast<int>(msg.f2);
          forward_sched(r, msg);
        }
        break;
      case kTagSchedNc:
        if (nc_ < 0) {
          nc_ = static_cast<int>(msg.f2);
          forward_sched(r, msg);
        }
        break;
      case kTagSchedStart:
        if (r_wbfs_ == 0) {
          r_wbfs_ = r + static_cast<int>(msg.f2);
          compute_schedule();
          // Re-encode the countdown relative to the forwarding round.
          Message fwd = Message::announce(kTagSchedStart, r_wbfs_ - (r + 1));
          for (int ch : bfs_children_) schedule(r + 1, ch, fwd);
        }
        break;
    }
  }

  void forward_sched(int r, const Message& msg) {
    for (int ch : bfs_children_) schedule(r + 1, ch, msg);
  }

  void maybe_finalize_children(int r) {
    if (depth_ < 0 || children_final_ || r < depth_ + 6) return;
    for (const auto& [u, w] : nbrs_)
      if (nbr_depth_[u] < 0 && u != bfs_parent_) return;
    children_final_ = true;
  }

  void maybe_send_bfs_report(int r) {
    if (!children_final_ || reported_ ||
        reports_in_ < static_cast<int>(bfs_children_.size()))
      return;
    reported_ = true;
    int subtree_depth = std::max(agg_depth_, depth_);
    long long centers = agg_centers_ + (is_center_ ? 1 : 0);
    if (node_ == 0) {
      // Leader: fix the schedule and start the downcast.
      dprime_ = 2 * subtree_depth;
      nc_ = static_cast<int>(centers);
      max_depth_ = subtree_depth;
      // The downcast needs max_depth_ rounds to reach the deepest node; the
      // start announcement carries a countdown so only round offsets travel.
      r_wbfs_ = r + 2 + max_depth_ + 2;
      compute_schedule();
      for (int ch : bfs_children_) {
        schedule(r, ch, Message::announce(kTagSchedDprime, dprime_));
        schedule(r + 1, ch, Message::announce(kTagSchedNc, nc_));
        schedule(r + 2, ch,
                 Message::announce(kTagSchedStart, r_wbfs_ - (r + 2)));
      }
    } else {
      schedule(r, bfs_parent_, Message::report(subtree_depth, 0, centers));
    }
  }

  void compute_schedule() {
    if (!sched_known()) return;
    int rw = nc_ + dprime_;
    r_report_ = r_wbfs_ + rw;
    r_dispatch_ = r_report_ + nc_;
    r_buy_ = r_dispatch_ + nc_ * params_.k_count(n_);
    r_end_ = r_buy_ + rw - 1;
    core_.init(node_, n_, is_center_, /*keep_log=*/false);
  }

  void build_dispatch_queue() {
    std::vector<int> centers;
    for (const auto& e : core_.entries()) centers.push_back(e.t.s);
    std::sort(centers.begin(), centers.end());
    // Own data counts as a member report for v = this center.
    for (const auto& e : core_.entries())
      member_data_[{e.t.s, node_}] = {e.t.d, e.t.w};
    std::vector<int> mem(members_);
    mem.push_back(node_);
    std::sort(mem.begin(), mem.end());
    for (long long k = 1; k <= params_.k_max(n_); k *= 2) {
      bool in_sk = sk_coin(params_, seed_, n_, node_, k);
      sk_membership_.emplace_back(k, in_sk ? 1 : 0);
      if (!in_sk) continue;
      for (int ci : centers) {
        int best_v = -1;
        long long best_d = 0, best_miss = 0;
        for (int v : mem) {
          auto it = member_data_.find({ci, v});
          if (it == member_data_.end()) continue;
          auto [d, miss] = it->second;
          if (miss >= 2 * k) continue;
          if (best_v < 0 || d < best_d || (d == best_d && miss < best_miss)) {
            best_v = v;
            best_d = d;
            best_miss = miss;
          }
        }
        if (best_v < 0) continue;
        decisions_.push_back({k, ci, node_, best_v});
        dispatch_queue_.push_back({ci, best_v});
      }
    }
  }

  void schedule_dispatch_send(int r) {
    if (!is_center_ || r < r_dispatch_ || r >= r_buy_) return;
    int idx = r - r_dispatch_;
    if (idx >= static_cast<int>(dispatch_queue_.size())) return;
    auto [ci, v] = dispatch_queue_[idx];
    if (v == node_) {
      tokens_.insert(ci);
    } else {
      schedule(r, v, Message::buy(ci));
      add_edge(make_edge(node_, v), EdgeLabel::BoughtPath);
    }
  }

  void schedule_buy_sends(int r) {
    if (r < r_buy_ || r > r_end_) return;
    int rw = nc_ + dprime_;
    for (int ci : tokens_) {
      if (forwarded_.count(ci) || ci == node_) continue;
      auto it = last_accept_.find(ci);
      if (it == last_accept_.end())
        throw std::logic_error("buy token without a receive-log entry");
      auto [acc_round, from] = it->second;
      int send_round = r_buy_ + (rw - acc_round + 1) - 1;
      if (r == send_round) {
        schedule(r, from, Message::buy(ci));
        add_edge(make_edge(node_, from), EdgeLabel::BoughtPath);
        forwarded_.insert(ci);
      } else if (r > send_round) {
        throw std::logic_error("buy token arrived after its replay round");
      }
    }
  }

  // immutable
  int node_;
  int n_;
  PathBuyParams params_;
  std::vector<std::pair<int, Weight>> nbrs_;
  bool is_center_;
  std::uint64_t seed_;

  // clustering
  std::vector<int> nbr_centers_;
  std::vector<int> joined_;   // nodes that joined me (centers only)
  std::vector<int> members_;  // cluster members excluding self
  int cluster_of_ = -1;
  std::vector<char> h0_nbr_;
  std::vector<char> is_nbr_;

  // BFS setup
  int depth_ = -1;
  int bfs_parent_ = -1;
  std::vector<int> bfs_children_;
  std::vector<int> nbr_depth_;
  bool children_final_ = false;
  bool reported_ = false;
  int reports_in_ = 0;
  int agg_depth_ = 0;
  long long agg_centers_ = 0;
  int max_depth_ = 0;

  // schedule (absolute rounds); r_wbfs_ == 0 means unknown
  int dprime_ = -1;
  int nc_ = -1;
  int r_wbfs_ = 0, r_report_ = 0, r_dispatch_ = 0, r_buy_ = 0, r_end_ = 0;
  int cur_round_ = 0;

  // WBFS phase
  WbfsCore core_;
  std::map<int, std::pair<int, int>> last_accept_;  // source -> (round, from)

  // reports and path buying
  std::map<std::pair<int, int>, std::pair<long long, long long>> member_data_;
  std::vector<std::pair<int, int>> dispatch_queue_;  // (ci, v)
  std::vector<std::pair<long long, char>> sk_membership_;
  std::vector<BuyDecision> decisions_;
  std::set<int> tokens_;
  std::set<int> forwarded_;

  // outgoing message plan
  std::map<int, std::vector<std::pair<int, Message>>> outbox_;

  // result
  std::vector<std::pair<Edge, EdgeLabel>> local_edges_;
};

}  // namespace

std::pair<SpannerResult, Trace> distributed_6ap(const Graph& g,
                                                const PathBuyParams& params,
                                                std::uint64_t seed,
                                                SimConfig config) {
  if (g.n < 2) throw std::invalid_argument("spanner needs n >= 2");
  if (config.max_rounds == 0)
    config.max_rounds =
        g.n * (9 + params.k_count(g.n)) + 100;
  config.global_seed = seed;
  auto sim = run_simulation(
      g,
      [&](int node, std::uint64_t) -> std::unique_ptr<NodeProgram> {
        return std::make_unique<SpannerProgram>(node, g, params, seed);
      },
      config);

  SpannerResult res;
  res.rounds = sim.trace.total_rounds;
  std::vector<const SpannerProgram*> progs;
  for (const auto& p : sim.programs)
    progs.push_back(static_cast<const SpannerProgram*>(p.get()));

  res.dprime = progs[0]->dprime();
  for (int v = 0; v < g.n; ++v)
    if (progs[v]->is_center()) res.centers.push_back(v);

  for (const auto* p : progs)
    for (const auto& [e, label] : p->edges()) {
      res.h.insert(e);
      if (label != EdgeLabel::BoughtPath) res.h0.insert(e);
      auto [it, inserted] = res.provenance.emplace(e, label);
      // H0 labels take precedence over bought-path labels.
      if (!inserted && it->second == EdgeLabel::BoughtPath &&
          label != EdgeLabel::BoughtPath)
        it->second = label;
    }

  // Per-k stats aggregated across centers.
  std::map<long long, PerKStats> per_k;
  std::map<long long, std::vector<int>> sk_members;
  for (long long k = 1; k <= params.k_max(g.n); k *= 2) {
    per_k[k].k = k;
    sk_members[k];
  }
  for (int v = 0; v < g.n; ++v) {
    const auto* p = progs[v];
    for (const auto& [k, in] : p->sk_membership())
      if (in) {
        ++per_k[k].sk_size;
        sk_members[k].push_back(v);
      }
    for (const auto& d : p->decisions()) {
      ++per_k[d.k].paths_bought;
      res.decisions.push_back(d);
    }
  }
  for (auto& [k, stats] : per_k) {
    res.per_k.push_back(stats);
    res.sk_members.push_back(sk_members[k]);
  }
  std::sort(res.decisions.begin(), res.decisions.end());
  return {std::move(res), std::move(sim.trace)};
}

}  // namespace congest
