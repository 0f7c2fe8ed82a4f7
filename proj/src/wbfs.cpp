#include "congest/wbfs.hpp"

#include <algorithm>
#include <ostream>

namespace congest {

void WbfsCore::init(int node, int n, bool is_source, bool keep_log) {
  node_ = node;
  keep_log_ = keep_log;
  pos_by_source_.assign(n, -1);
  list_.clear();
  rlog_.clear();
  if (is_source) {
    list_.push_back({{0, node, 0}, -1, false});
    pos_by_source_[node] = 0;
  }
}

std::optional<Triplet> WbfsCore::next_unsent() const {
  for (const auto& e : list_)
    if (!e.sent) return e.t;
  return std::nullopt;
}

void WbfsCore::mark_sent(const Triplet& t) {
  for (auto& e : list_)
    if (!e.sent) {
      // next_unsent returns the first unsent entry; it must match.
      if (e.t == t) e.sent = true;
      return;
    }
}

bool WbfsCore::accept(int round, int sender, Weight edge_weight,
                      const Triplet& msg) {
  Triplet cand{msg.d + 1, msg.s, msg.w + edge_weight};
  int pos = pos_by_source_[cand.s];
  if (pos >= 0) {
    const Triplet& cur = list_[pos].t;
    bool improves = cand.d < cur.d || (cand.d == cur.d && cand.w < cur.w);
    if (!improves) return false;
    list_.erase(list_.begin() + pos);
    for (int i = pos; i < static_cast<int>(list_.size()); ++i)
      pos_by_source_[list_[i].t.s] = i;
  }
  auto it = std::lower_bound(
      list_.begin(), list_.end(), cand,
      [](const Entry& e, const Triplet& t) { return e.t < t; });
  int at = static_cast<int>(it - list_.begin());
  list_.insert(it, {cand, sender, false});
  for (int i = at; i < static_cast<int>(list_.size()); ++i)
    pos_by_source_[list_[i].t.s] = i;
  if (keep_log_) rlog_.push_back({round, sender, cand.s});
  return true;
}

int WbfsCore::parent_of(int source) const {
  int pos = pos_by_source_[source];
  return pos < 0 ? -2 : list_[pos].parent;
}

void WbfsCore::digest(std::vector<Triplet>& out) const {
  out.reserve(list_.size());
  for (const auto& e : list_) out.push_back(e.t);
}

WbfsProgram::WbfsProgram(int node, const Graph& g, bool is_source,
                         bool keep_log)
    : nbrs_(g.adj[node]) {
  core_.init(node, g.n, is_source, keep_log);
}

void WbfsProgram::outgoing(int /*round*/,
                           std::vector<std::pair<int, Message>>& out) const {
  auto t = core_.next_unsent();
  if (!t) return;
  Message m = Message::triplet(*t);
  out.reserve(nbrs_.size());
  for (const auto& [v, w] : nbrs_) out.emplace_back(v, m);
}

void WbfsProgram::commit_send(int /*round*/) {
  if (auto t = core_.next_unsent()) core_.mark_sent(*t);
}

void WbfsProgram::receive(int round, int sender, const Message& msg) {
  if (msg.kind != MsgKind::Triplet) return;
  auto it = std::lower_bound(
      nbrs_.begin(), nbrs_.end(), sender,
      [](const auto& e, int x) { return e.first < x; });
  core_.accept(round, sender, it->second, msg.as_triplet());
}

void WbfsProgram::proximity_digest(std::vector<Triplet>& out) const {
  core_.digest(out);
}

ProgramFactory wbfs_factory(const Graph& g, const std::vector<int>& sources,
                            bool keep_log) {
  if (sources.empty()) throw std::invalid_argument("sources must be non-empty");
  std::vector<char> is_source(g.n, 0);
  for (int s : sources) {
    if (s < 0 || s >= g.n) throw std::invalid_argument("source out of range");
    is_source[s] = 1;
  }
  return [&g, is_source = std::move(is_source), keep_log](
             int node, std::uint64_t) -> std::unique_ptr<NodeProgram> {
    return std::make_unique<WbfsProgram>(node, g, is_source[node] != 0,
                                         keep_log);
  };
}

std::map<int, WbfsTree> extract_trees(const SimResult& result,
                                      const std::vector<int>& sources) {
  int n = static_cast<int>(result.programs.size());
  std::map<int, WbfsTree> trees;
  for (int s : sources) {
    WbfsTree t;
    t.source = s;
    t.parent.assign(n, -1);
    t.dist.assign(n, -1);
    t.weight.assign(n, 0);
    trees.emplace(s, std::move(t));
  }
  for (int v = 0; v < n; ++v) {
    const auto* p = dynamic_cast<const WbfsProgram*>(result.programs[v].get());
    if (!p) throw std::invalid_argument("program is not a WbfsProgram");
    const auto& core = p->core();
    for (int s : sources) {
      int parent = core.parent_of(s);
      if (parent == -2)
        throw IncompleteRun("node " + std::to_string(v) +
                            " has no entry for source " + std::to_string(s));
      auto& t = trees.at(s);
      t.parent[v] = parent == -1 ? v : parent;
      for (const auto& e : core.entries())
        if (e.t.s == s) {
          t.dist[v] = e.t.d;
          t.weight[v] = e.t.w;
        }
    }
  }
  return trees;
}

DetectionAnswer solve_detection(const Graph& g, const std::vector<int>& sources,
                                int d, int k) {
  if (d < 0) throw std::invalid_argument("d must be >= 0");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  int D = diameter(g);
  int rounds = std::min(d, D) + std::min<int>(k, sources.size());
  SimConfig cfg;
  cfg.max_rounds = rounds;
  auto result = run_simulation(g, wbfs_factory(g, sources), cfg);
  DetectionAnswer ans(g.n);
  for (int v = 0; v < g.n; ++v) {
    const auto* p = dynamic_cast<const WbfsProgram*>(result.programs[v].get());
    for (const auto& e : p->core().entries()) {
      if (e.t.d > d) break;  // list sorted by (d, s, w)
      if (static_cast<int>(ans[v].size()) == k) break;
      ans[v].push_back({e.t, e.parent});
    }
  }
  return ans;
}

namespace {

// Index (1-based) of a triplet in a digest list, or 0 if absent.
int index_of(const std::vector<Triplet>& list, const Triplet& t) {
  auto it = std::lower_bound(list.begin(), list.end(), t);
  if (it == list.end() || !(*it == t)) return 0;
  return static_cast<int>(it - list.begin()) + 1;
}

}  // namespace

std::vector<InvariantViolation> check_round_invariants(const Trace& trace) {
  if (!trace.has_digests)
    throw std::invalid_argument("trace was recorded without state digests");
  std::vector<InvariantViolation> out;
  int rounds = trace.total_rounds;
  int n = trace.digests.empty() ? 0 : static_cast<int>(trace.digests[0].size());

  // (a) live-triplet indices never decrease across rounds.
  for (int r = 0; r + 1 <= rounds; ++r) {
    for (int v = 0; v < n; ++v) {
      const auto& before = trace.digests[r][v];
      const auto& after = trace.digests[r + 1][v];
      for (int i = 0; i < static_cast<int>(before.size()); ++i) {
        int idx = index_of(after, before[i]);
        if (idx != 0 && idx < i + 1)
          out.push_back({"index-decrease", r + 1, v,
                         "triplet index dropped from " +
                             std::to_string(i + 1) + " to " +
                             std::to_string(idx)});
      }
      // (c) insertions at round r+1: d + l(start of round r+2) > r+1.
      for (int i = 0; i < static_cast<int>(after.size()); ++i) {
        if (index_of(before, after[i]) != 0) continue;
        int ell = i + 1;
        if (!(after[i].d + ell > r + 1))
          out.push_back({"insert-too-late", r + 1, v,
                         "inserted triplet with d=" +
                             std::to_string(after[i].d) + " at index " +
                             std::to_string(ell)});
      }
    }
  }

  // (b) sends satisfy d + l >= r; (d) one triplet broadcast per sender/round.
  std::size_t i = 0;
  while (i < trace.messages.size()) {
    int r = trace.messages[i].round;
    std::vector<std::vector<Triplet>> sent_by(n);
    while (i < trace.messages.size() && trace.messages[i].round == r) {
      const auto& m = trace.messages[i];
      ++i;
      if (m.msg.kind != MsgKind::Triplet) continue;
      Triplet t = m.msg.as_triplet();
      auto& sb = sent_by[m.from];
      if (std::find(sb.begin(), sb.end(), t) == sb.end()) sb.push_back(t);
      if (r - 1 < static_cast<int>(trace.digests.size())) {
        int ell = index_of(trace.digests[r - 1][m.from], t);
        if (ell == 0 || t.d + ell < r)
          out.push_back({"send-too-early", r, m.from,
                         "sent d=" + std::to_string(t.d) + " at index " +
                             std::to_string(ell)});
      }
    }
    for (int v = 0; v < n; ++v)
      if (sent_by[v].size() > 1)
        out.push_back({"multi-send", r, v,
                       std::to_string(sent_by[v].size()) +
                           " distinct triplets broadcast in one round"});
  }
  return out;
}

void dump_proximity(const SimResult& result, std::ostream& out) {
  for (std::size_t v = 0; v < result.programs.size(); ++v) {
    const auto* p = dynamic_cast<const WbfsProgram*>(result.programs[v].get());
    if (!p) continue;
    out << "{\"node\":" << v << ",\"entries\":[";
    bool first = true;
    for (const auto& e : p->core().entries()) {
      if (!first) out << ',';
      first = false;
      out << "{\"d\":" << e.t.d << ",\"s\":" << e.t.s << ",\"w\":" << e.t.w
          << ",\"parent\":" << e.parent << '}';
    }
    out << "]}\n";
  }
}

}  // namespace congest
