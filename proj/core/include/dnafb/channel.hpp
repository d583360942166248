#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dnafb {

using Symbol = std::uint8_t;
using DnaSequence = std::vector<Symbol>;

/// Parameters of one i.i.d. insertion/deletion/substitution channel use.
struct ChannelParams {
  double p_ins = 0.0;
  double p_del = 0.0;
  double p_sub = 0.0;
  int alphabet_size = 4;

  double p_trans() const { return 1.0 - p_ins - p_del; }

  /// Throws std::invalid_argument on out-of-range probabilities.
  /// p_del == 1 with p_ins == 0 is admitted as the degenerate all-delete case.
  void validate() const;
};

enum class EventKind : std::uint8_t { Insert, Delete, TransmitClean, TransmitSub };

struct Event {
  EventKind kind;
  Symbol value = 0;  // inserted or substituted symbol; unused otherwise
};

/// Full record of one channel realization. Replaying the events on the
/// input reproduces the output exactly.
struct EventTrace {
  std::vector<Event> events;
  /// symbol_drift[i] = insertions minus deletions once symbol i has been
  /// resolved (i = 0..N); symbol_drift[0] == 0, symbol_drift[N] == N' - N.
  std::vector<int> symbol_drift;

  int final_drift() const { return symbol_drift.empty() ? 0 : symbol_drift.back(); }
  int insertions() const;
  int deletions() const;
};

/// Applies a trace to an input sequence; the channel-output reconstruction
/// used by the replay invariant.
DnaSequence replay(const DnaSequence& x, const EventTrace& trace);

/// One pass of x through the IDS channel. Deterministic given seed.
std::pair<DnaSequence, EventTrace> transmit(const DnaSequence& x,
                                            const ChannelParams& params,
                                            std::uint64_t seed);

struct ReadSet {
  std::vector<DnaSequence> reads;
  std::vector<EventTrace> traces;  // simulation side only

  int count() const { return static_cast<int>(reads.size()); }
};

/// M independent reads of x; read j uses sub_seed(seed, j).
ReadSet transmit_multi(const DnaSequence& x, const ChannelParams& params,
                       int reads, std::uint64_t seed);

/// Drift sampled at multiples of the inner block length n:
/// (d_0, d_1, ..., d_{N/n}) with d_0 = 0 and d_{N/n} = N' - N.
std::vector<int> block_drift(const EventTrace& trace, int n);

/// Standard deviation of the final drift, sqrt(N p_del / (1 - p_del)).
double drift_std(int n_symbols, double p_del);

char symbol_to_char(Symbol s);
Symbol symbol_from_char(char c);
std::string to_acgt(const DnaSequence& x);
DnaSequence from_acgt(std::string_view text);

}  // namespace dnafb
