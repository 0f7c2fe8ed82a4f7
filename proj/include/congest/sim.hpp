#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "congest/graph.hpp"
#include "congest/message.hpp"

namespace congest {

// Behavioral contract for a node in the round-synchronous engine.
//
// Per round the engine calls, for every node: round_begin, then outgoing
// (which must be side-effect free), then commit_send once the messages are
// accepted, then receive for each delivered message. outgoing never sees
// messages received in the same round.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;

  virtual void round_begin(int /*round*/) {}
  virtual void outgoing(int round,
                        std::vector<std::pair<int, Message>>& out) const = 0;
  virtual void commit_send(int /*round*/) {}
  virtual void receive(int round, int sender, const Message& msg) = 0;
  virtual bool halted() const { return false; }

  // Optional: current proximity list, recorded into trace digests.
  virtual void proximity_digest(std::vector<Triplet>& /*out*/) const {}
};

using ProgramFactory =
    std::function<std::unique_ptr<NodeProgram>(int node, std::uint64_t seed)>;

struct TraceMessage {
  int round;
  int from;
  int to;
  Message msg;
};

struct Trace {
  int total_rounds = 0;
  std::vector<TraceMessage> messages;
  // digests[r][v] = v's proximity list at the beginning of round r+1
  // (digests[0] is the state before round 1). Present iff record_trace.
  std::vector<std::vector<std::vector<Triplet>>> digests;
  bool has_digests = false;

  // JSON-lines: one record per message plus one summary record per round,
  // stable field ordering.
  void write_jsonl(std::ostream& out) const;
};

struct SimConfig {
  int max_rounds = 0;
  bool bandwidth_check = true;
  bool record_trace = false;
  bool replay_check = false;         // call outgoing twice, compare
  bool descending_delivery = false;  // deliver in descending sender id
  std::uint64_t global_seed = 0;
};

struct BandwidthViolation : std::runtime_error {
  int round, from, to, bits;
  BandwidthViolation(int round_, int from_, int to_, int bits_, int budget);
};

// Two messages on one directed edge in one round.
struct PipelineOverflow : std::runtime_error {
  int round, from, to;
  PipelineOverflow(int round_, int from_, int to_);
};

struct NonDeterminismGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimResult {
  std::vector<std::unique_ptr<NodeProgram>> programs;
  Trace trace;
};

// Runs rounds 1..max_rounds, or until every program reports halted. Node
// seeds are derive_seed(global_seed, node). Fully deterministic.
SimResult run_simulation(const Graph& g, const ProgramFactory& factory,
                         const SimConfig& config);

}  // namespace congest
