#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "congest/graph.hpp"
#include "congest/sim.hpp"

namespace congest {

struct ReceiveLogEntry {
  int round;   // round in which the accepted triplet arrived
  int sender;  // neighbor it arrived from
  int source;  // WBFS source the triplet refers to
};

// Node-local state of the weighted distributed Bellman-Ford algorithm,
// embeddable into larger programs. Holds the proximity list (one entry per
// source, sorted by (d, s, w)) with per-entry sent flags, and the path map
// via per-entry parent pointers.
class WbfsCore {
 public:
  struct Entry {
    Triplet t;
    int parent;  // -1 for "self is the source"
    bool sent;
  };

  WbfsCore() = default;
  // rounds are whatever the caller feeds accept(); node-relative weights come
  // from nbr_weights, indexed by neighbor id.
  void init(int node, int n, bool is_source, bool keep_log);

  // Send phase: the lexicographically smallest unsent triplet, if any. Pure.
  std::optional<Triplet> next_unsent() const;
  void mark_sent(const Triplet& t);

  // Receive phase for an incoming triplet over an edge of the given weight.
  // Returns true if the list changed.
  bool accept(int round, int sender, Weight edge_weight, const Triplet& msg);

  const std::vector<Entry>& entries() const { return list_; }
  // Parent toward `source`, -2 if unknown, -1 if this node is the source.
  int parent_of(int source) const;
  const std::vector<ReceiveLogEntry>& receive_log() const { return rlog_; }
  int node() const { return node_; }

  void digest(std::vector<Triplet>& out) const;

 private:
  int node_ = -1;
  std::vector<Entry> list_;        // sorted by triplet
  std::vector<int> pos_by_source_;  // -1 if absent
  std::vector<ReceiveLogEntry> rlog_;
  bool keep_log_ = false;
};

// Algorithm-1 node program. Broadcasts one unsent triplet per round and
// merges incoming triplets under the shorter-or-equal-length-and-lighter rule.
class WbfsProgram : public NodeProgram {
 public:
  WbfsProgram(int node, const Graph& g, bool is_source, bool keep_log);

  void outgoing(int round,
                std::vector<std::pair<int, Message>>& out) const override;
  void commit_send(int round) override;
  void receive(int round, int sender, const Message& msg) override;
  void proximity_digest(std::vector<Triplet>& out) const override;

  const WbfsCore& core() const { return core_; }

 private:
  WbfsCore core_;
  std::vector<std::pair<int, Weight>> nbrs_;
};

ProgramFactory wbfs_factory(const Graph& g, const std::vector<int>& sources,
                            bool keep_log = false);

struct IncompleteRun : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-source WBFS trees from the final node states. Throws IncompleteRun if
// some node lacks an entry for some source.
std::map<int, WbfsTree> extract_trees(const SimResult& result,
                                      const std::vector<int>& sources);

struct DetectionEntry {
  Triplet t;
  int parent;  // -1 if the node is the source itself
};
using DetectionAnswer = std::vector<std::vector<DetectionEntry>>;  // per node

// Runs the WBFS program for min{d, D} + min{k, |S|} rounds and truncates each
// node's list to its first min{k, lambda_v^d} entries.
DetectionAnswer solve_detection(const Graph& g, const std::vector<int>& sources,
                                int d, int k);

struct InvariantViolation {
  std::string kind;  // "index-decrease", "send-too-early", "insert-too-late",
                     // "multi-send"
  int round;
  int node;
  std::string detail;
};

// Checks the runtime trace invariants of the WBFS algorithm:
//  (a) list indices of live triplets never decrease,
//  (b) a send of (d,s,w) at round r satisfies d + l >= r,
//  (c) an insertion at round r satisfies d + l(at round r+1) > r,
//  (d) at most one triplet broadcast per sender per round.
// Requires a trace recorded with digests.
std::vector<InvariantViolation> check_round_invariants(const Trace& trace);

// JSON dump "{node, entries:[{d,s,w,parent}...]}" per node, in list order.
void dump_proximity(const SimResult& result, std::ostream& out);

}  // namespace congest
