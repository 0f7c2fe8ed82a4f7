#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>

#include "congest/graph.hpp"

namespace congest {

// (distance, source, weight), ordered lexicographically on (d, s, w).
struct Triplet {
  int d = 0;
  int s = 0;
  Weight w = 0;

  auto operator<=>(const Triplet&) const = default;
};

enum class MsgKind : std::uint8_t { Triplet, Buy, Announce, Report };

// One CONGEST message. Field use by kind:
//   Triplet:  f0=d, f1=s, f2=w
//   Buy:      f1=s
//   Announce: tag, f2=value
//   Report:   f0=d, f1=s, f2=missing
struct Message {
  MsgKind kind = MsgKind::Announce;
  int tag = 0;
  long long f0 = 0, f1 = 0, f2 = 0;

  bool operator==(const Message&) const = default;

  static Message triplet(const Triplet& t) {
    return {MsgKind::Triplet, 0, t.d, t.s, t.w};
  }
  static Message buy(int s) { return {MsgKind::Buy, 0, 0, s, 0}; }
  static Message announce(int tag, long long value) {
    return {MsgKind::Announce, tag, 0, 0, value};
  }
  static Message report(long long d, long long s, long long missing) {
    return {MsgKind::Report, 0, d, s, missing};
  }

  Triplet as_triplet() const {
    return {static_cast<int>(f0), static_cast<int>(f1), f2};
  }

  const char* kind_name() const;
};

// Number of bits needed for values in {0,...,x}.
inline int bits_for_range(long long x) {
  return std::bit_width(static_cast<std::uint64_t>(x));
}

// Message budget B = 2*ceil(log2(n+1)) + ceil(log2(n*W+1)) + 4 tag bits.
inline int bits_per_message(int n, Weight W) {
  return 2 * bits_for_range(n) + bits_for_range(static_cast<long long>(n) * W) +
         4;
}

// Bit size of a concrete payload under the static field widths for (n, W).
// Returns -1 if a field is out of its declared range:
//   Triplet/Report: 0 <= d <= n, 0 <= s < n, 0 <= w <= n*W
//   Buy:            0 <= s < n
//   Announce:       0 <= value < (n+1)^2
int message_bit_size(const Message& m, int n, Weight W);

}  // namespace congest
