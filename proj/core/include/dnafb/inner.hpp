#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dnafb/channel.hpp"
#include "dnafb/codebook.hpp"

namespace dnafb {

enum class InnerKind { CC, WM, TVC1, TVC2 };

std::string inner_kind_name(InnerKind kind);
InnerKind inner_kind_from_name(const std::string& name);

struct InnerConfig {
  int outer_length = 0;        // N_o, symbols over the outer field
  std::string codebook_file;   // empty -> built-in codebooks
  bool strict = false;         // require min edit distance >= 4 per codebook
  int offset = -1;             // -1 scheme default, 0 off, 1 on
  std::uint64_t seed = 0;      // drives offset sequence and the TVC1 pattern
};

/// Immutable inner synchronization code. Each trellis step consumes one
/// outer symbol (label_bits bits) and emits block_length DNA symbols.
struct InnerScheme {
  InnerKind kind = InnerKind::WM;
  int block_length = 0;   // n
  int label_bits = 0;     // k
  int q = 4;
  int memory = 0;         // CC termination length, 0 for block schemes
  int outer_length = 0;   // N_o
  std::array<int, 2> generators = {05, 07};  // CC taps, octal
  std::vector<Codebook> codebooks;           // WM/TVC
  std::vector<int> pattern;                  // codebook index per step
  DnaSequence offset;                        // length dna_length(), may be zero

  int steps() const { return outer_length + memory; }
  int dna_length() const { return steps() * block_length; }
  int num_states() const { return kind == InnerKind::CC ? 1 << memory : 1; }
  int num_inputs() const { return 1 << label_bits; }

  int next_state(int state, int input) const;
  /// Output block for one trellis step, offset already applied.
  DnaSequence block(int step, int state, int input) const;

  double rate() const;          // N_o*k / ((N_o+m)*n), bits per DNA symbol
  double nominal_rate() const;  // the conventional figure: 0.98 for CC, else 1.0
};

/// Uniform i.i.d. quaternary sequence, deterministic in the seed.
DnaSequence offset_sequence(std::uint64_t seed, int length, int q = 4);

InnerScheme make_scheme(InnerKind kind, const InnerConfig& cfg);

/// Maps outer symbols through the scheme, appends CC termination, adds offset.
DnaSequence encode(const InnerScheme& scheme, const std::vector<int>& w);

}  // namespace dnafb
