#include "congest/sim.hpp"

#include <algorithm>
#include <ostream>

#include "congest/rng.hpp"

namespace congest {

const char* Message::kind_name() const {
  switch (kind) {
    case MsgKind::Triplet: return "triplet";
    case MsgKind::Buy: return "buy";
    case MsgKind::Announce: return "announce";
    case MsgKind::Report: return "report";
  }
  return "?";
}

int message_bit_size(const Message& m, int n, Weight W) {
  const int bn = bits_for_range(n);
  const int bw = bits_for_range(static_cast<long long>(n) * W);
  switch (m.kind) {
    case MsgKind::Triplet:
    case MsgKind::Report:
      if (m.f0 < 0 || m.f0 > n) return -1;
      if (m.f1 < 0 || m.f1 >= n) return -1;
      if (m.f2 < 0 || m.f2 > static_cast<long long>(n) * W) return -1;
      return 2 * bn + bw + 4;
    case MsgKind::Buy:
      if (m.f1 < 0 || m.f1 >= n) return -1;
      return bn + 4;
    case MsgKind::Announce: {
      long long lim = static_cast<long long>(n + 1) * (n + 1);
      if (m.f2 < 0 || m.f2 >= lim) return -1;
      return 2 * bn + 4;
    }
  }
  return -1;
}

BandwidthViolation::BandwidthViolation(int round_, int from_, int to_,
                                       int bits_, int budget)
    : std::runtime_error("bandwidth violation at round " +
                         std::to_string(round_) + " on edge " +
                         std::to_string(from_) + "->" + std::to_string(to_) +
                         ": " + std::to_string(bits_) + " bits > budget " +
                         std::to_string(budget)),
      round(round_), from(from_), to(to_), bits(bits_) {}

PipelineOverflow::PipelineOverflow(int round_, int from_, int to_)
    : std::runtime_error("two messages on edge " + std::to_string(from_) +
                         "->" + std::to_string(to_) + " in round " +
                         std::to_string(round_)),
      round(round_), from(from_), to(to_) {}

void Trace::write_jsonl(std::ostream& out) const {
  std::size_t i = 0;
  for (int r = 1; r <= total_rounds; ++r) {
    int count = 0;
    while (i < messages.size() && messages[i].round == r) {
      const auto& m = messages[i];
      out << "{\"round\":" << r << ",\"from\":" << m.from
          << ",\"to\":" << m.to << ",\"kind\":\"" << m.msg.kind_name() << '"';
      switch (m.msg.kind) {
        case MsgKind::Triplet:
        case MsgKind::Report:
          out << ",\"d\":" << m.msg.f0 << ",\"s\":" << m.msg.f1
              << ",\"w\":" << m.msg.f2;
          break;
        case MsgKind::Buy:
          out << ",\"s\":" << m.msg.f1;
          break;
        case MsgKind::Announce:
          out << ",\"tag\":" << m.msg.tag << ",\"value\":" << m.msg.f2;
          break;
      }
      out << "}\n";
      ++i;
      ++count;
    }
    out << "{\"round\":" << r << ",\"summary\":true,\"messages\":" << count
        << "}\n";
  }
}

SimResult run_simulation(const Graph& g, const ProgramFactory& factory,
                         const SimConfig& config) {
  if (config.max_rounds < 0)
    throw std::invalid_argument("max_rounds must be >= 0");
  SimResult res;
  res.programs.reserve(g.n);
  for (int v = 0; v < g.n; ++v)
    res.programs.push_back(factory(v, derive_seed(config.global_seed, v)));

  const int budget = bits_per_message(g.n, g.max_weight);
  Trace& trace = res.trace;
  trace.has_digests = config.record_trace;

  auto record_digests = [&] {
    if (!config.record_trace) return;
    auto& snap = trace.digests.emplace_back(g.n);
    for (int v = 0; v < g.n; ++v) res.programs[v]->proximity_digest(snap[v]);
  };
  record_digests();  // state before round 1

  std::vector<std::pair<int, Message>> outbuf, replaybuf;
  std::vector<TraceMessage> pending;
  // seen_to[v] = last round in which this sender targeted v.
  std::vector<std::vector<int>> seen_to(g.n, std::vector<int>(g.n, 0));

  for (int round = 1; round <= config.max_rounds; ++round) {
    bool all_halted = true;
    for (const auto& p : res.programs)
      if (!p->halted()) {
        all_halted = false;
        break;
      }
    if (all_halted) break;

    for (int v = 0; v < g.n; ++v) res.programs[v]->round_begin(round);

    pending.clear();
    for (int v = 0; v < g.n; ++v) {
      outbuf.clear();
      res.programs[v]->outgoing(round, outbuf);
      if (config.replay_check) {
        replaybuf.clear();
        res.programs[v]->outgoing(round, replaybuf);
        if (replaybuf != outbuf)
          throw NonDeterminismGuard("node " + std::to_string(v) +
                                    " emitted different output on replay of "
                                    "round " + std::to_string(round));
      }
      for (const auto& [to, msg] : outbuf) {
        if (to < 0 || to >= g.n || !g.has_edge(v, to))
          throw std::invalid_argument("node " + std::to_string(v) +
                                      " sent to non-neighbor " +
                                      std::to_string(to));
        if (seen_to[v][to] == round) throw PipelineOverflow(round, v, to);
        seen_to[v][to] = round;
        if (config.bandwidth_check) {
          int bits = message_bit_size(msg, g.n, g.max_weight);
          if (bits < 0 || bits > budget)
            throw BandwidthViolation(round, v, to, bits, budget);
        }
        pending.push_back({round, v, to, msg});
      }
      res.programs[v]->commit_send(round);
    }

    if (config.descending_delivery) {
      for (auto it = pending.rbegin(); it != pending.rend(); ++it)
        res.programs[it->to]->receive(round, it->from, it->msg);
    } else {
      for (const auto& m : pending)
        res.programs[m.to]->receive(round, m.from, m.msg);
    }

    trace.messages.insert(trace.messages.end(), pending.begin(),
                          pending.end());
    trace.total_rounds = round;
    record_digests();
  }
  return res;
}

}  // namespace congest
