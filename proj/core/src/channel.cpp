#include "dnafb/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "dnafb/rng.hpp"

namespace dnafb {

void ChannelParams::validate() const {
  if (alphabet_size < 2) throw std::invalid_argument("channel: alphabet_size must be >= 2");
  if (p_ins < 0.0 || p_del < 0.0 || p_sub < 0.0 || p_sub > 1.0)
    throw std::invalid_argument("channel: probabilities out of range");
  const bool all_delete = (p_del == 1.0 && p_ins == 0.0);
  if (p_ins + p_del >= 1.0 && !all_delete)
    throw std::invalid_argument("channel: p_ins + p_del must be < 1");
}

int EventTrace::insertions() const {
  int n = 0;
  for (const Event& e : events) n += (e.kind == EventKind::Insert);
  return n;
}

int EventTrace::deletions() const {
  int n = 0;
  for (const Event& e : events) n += (e.kind == EventKind::Delete);
  return n;
}

DnaSequence replay(const DnaSequence& x, const EventTrace& trace) {
  DnaSequence y;
  y.reserve(x.size() + 8);
  std::size_t pos = 0;
  for (const Event& e : trace.events) {
    switch (e.kind) {
      case EventKind::Insert:
        y.push_back(e.value);
        break;
      case EventKind::Delete:
        ++pos;
        break;
      case EventKind::TransmitClean:
        if (pos >= x.size()) throw std::invalid_argument("replay: trace longer than input");
        y.push_back(x[pos++]);
        break;
      case EventKind::TransmitSub:
        y.push_back(e.value);
        ++pos;
        break;
    }
  }
  if (pos != x.size()) throw std::invalid_argument("replay: trace does not consume input");
  return y;
}

std::pair<DnaSequence, EventTrace> transmit(const DnaSequence& x,
                                            const ChannelParams& params,
                                            std::uint64_t seed) {
  params.validate();
  const int q = params.alphabet_size;
  Rng rng(seed);

  DnaSequence y;
  EventTrace trace;
  y.reserve(x.size() + 8);
  trace.symbol_drift.reserve(x.size() + 1);

  int drift = 0;
  trace.symbol_drift.push_back(0);
  for (Symbol xi : x) {
    // State x_i: insert events loop until the symbol is deleted or transmitted.
    for (;;) {
      const double r = rng.uniform();
      if (r < params.p_ins) {
        const Symbol a = static_cast<Symbol>(rng.uniform_int(static_cast<std::uint32_t>(q)));
        trace.events.push_back({EventKind::Insert, a});
        y.push_back(a);
        ++drift;
      } else if (r < params.p_ins + params.p_del) {
        trace.events.push_back({EventKind::Delete, 0});
        --drift;
        break;
      } else {
        if (rng.uniform() < params.p_sub) {
          // Uniform over the q-1 symbols different from x_i.
          Symbol a = static_cast<Symbol>(rng.uniform_int(static_cast<std::uint32_t>(q - 1)));
          if (a >= xi) ++a;
          trace.events.push_back({EventKind::TransmitSub, a});
          y.push_back(a);
        } else {
          trace.events.push_back({EventKind::TransmitClean, 0});
          y.push_back(xi);
        }
        break;
      }
    }
    trace.symbol_drift.push_back(drift);
  }
  return {std::move(y), std::move(trace)};
}

ReadSet transmit_multi(const DnaSequence& x, const ChannelParams& params,
                       int reads, std::uint64_t seed) {
  if (reads < 1) throw std::invalid_argument("transmit_multi: reads must be >= 1");
  ReadSet out;
  out.reads.reserve(static_cast<std::size_t>(reads));
  out.traces.reserve(static_cast<std::size_t>(reads));
  for (int j = 0; j < reads; ++j) {
    auto [y, trace] = transmit(x, params, sub_seed(seed, static_cast<std::uint64_t>(j)));
    out.reads.push_back(std::move(y));
    out.traces.push_back(std::move(trace));
  }
  return out;
}

std::vector<int> block_drift(const EventTrace& trace, int n) {
  if (n < 1) throw std::invalid_argument("block_drift: n must be >= 1");
  const int symbols = static_cast<int>(trace.symbol_drift.size()) - 1;
  if (symbols < 0 || symbols % n != 0)
    throw std::invalid_argument("block_drift: n does not divide the sequence length");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(symbols / n) + 1);
  for (int i = 0; i <= symbols; i += n) out.push_back(trace.symbol_drift[static_cast<std::size_t>(i)]);
  return out;
}

double drift_std(int n_symbols, double p_del) {
  if (p_del < 0.0 || p_del >= 1.0) throw std::invalid_argument("drift_std: p_del must be in [0, 1)");
  return std::sqrt(static_cast<double>(n_symbols) * p_del / (1.0 - p_del));
}

namespace {
constexpr char kAlphabet[] = "ACGT";
}

char symbol_to_char(Symbol s) {
  if (s > 3) throw std::invalid_argument("symbol_to_char: only q = 4 has a letter alphabet");
  return kAlphabet[s];
}

Symbol symbol_from_char(char c) {
  switch (c) {
    case 'A': case 'a': return 0;
    case 'C': case 'c': return 1;
    case 'G': case 'g': return 2;
    case 'T': case 't': return 3;
    case '0': case '1': case '2': case '3': return static_cast<Symbol>(c - '0');
    default: throw std::invalid_argument(std::string("invalid DNA symbol '") + c + "'");
  }
}

std::string to_acgt(const DnaSequence& x) {
  std::string s;
  s.reserve(x.size());
  for (Symbol v : x) s.push_back(symbol_to_char(v));
  return s;
}

DnaSequence from_acgt(std::string_view text) {
  DnaSequence x;
  x.reserve(text.size());
  for (char c : text) x.push_back(symbol_from_char(c));
  return x;
}

}  // namespace dnafb
