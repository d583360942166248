#include "dnafb/inner.hpp"

#include <bit>
#include <stdexcept>

#include "dnafb/rng.hpp"

namespace dnafb {

std::string inner_kind_name(InnerKind kind) {
  switch (kind) {
    case InnerKind::CC: return "cc";
    case InnerKind::WM: return "wm";
    case InnerKind::TVC1: return "tvc1";
    case InnerKind::TVC2: return "tvc2";
  }
  return "?";
}

InnerKind inner_kind_from_name(const std::string& name) {
  if (name == "cc") return InnerKind::CC;
  if (name == "wm") return InnerKind::WM;
  if (name == "tvc1") return InnerKind::TVC1;
  if (name == "tvc2") return InnerKind::TVC2;
  throw std::invalid_argument("unknown inner scheme '" + name + "' (want cc|wm|tvc1|tvc2)");
}

int InnerScheme::next_state(int state, int input) const {
  if (kind != InnerKind::CC) return 0;
  return ((input << 1) | (state >> 1)) & (num_states() - 1);
}

DnaSequence InnerScheme::block(int step, int state, int input) const {
  if (step < 0 || step >= steps()) throw std::out_of_range("block: step out of range");
  if (input < 0 || input >= num_inputs()) throw std::out_of_range("block: input label out of range");
  DnaSequence out;
  if (kind == InnerKind::CC) {
    const int reg = (input << memory) | state;
    const int c1 = std::popcount(static_cast<unsigned>(reg & generators[0])) & 1;
    const int c2 = std::popcount(static_cast<unsigned>(reg & generators[1])) & 1;
    out.push_back(static_cast<Symbol>(2 * c1 + c2));
  } else {
    const Codebook& cb = codebooks[static_cast<std::size_t>(pattern[static_cast<std::size_t>(step)])];
    out = cb.words[static_cast<std::size_t>(input)];
  }
  for (int i = 0; i < block_length; ++i) {
    const std::size_t pos = static_cast<std::size_t>(step * block_length + i);
    out[static_cast<std::size_t>(i)] =
        static_cast<Symbol>((out[static_cast<std::size_t>(i)] + offset[pos]) % q);
  }
  return out;
}

double InnerScheme::rate() const {
  return static_cast<double>(outer_length) * label_bits / dna_length();
}

double InnerScheme::nominal_rate() const {
  return kind == InnerKind::CC ? 0.98 : 1.0;
}

DnaSequence offset_sequence(std::uint64_t seed, int length, int q) {
  if (length < 0) throw std::invalid_argument("offset_sequence: negative length");
  DnaSequence out(static_cast<std::size_t>(length));
  Rng rng(seed);
  for (Symbol& s : out) s = static_cast<Symbol>(rng.uniform_int(static_cast<std::uint32_t>(q)));
  return out;
}

InnerScheme make_scheme(InnerKind kind, const InnerConfig& cfg) {
  if (cfg.outer_length < 1) throw std::invalid_argument("make_scheme: outer_length must be >= 1");
  InnerScheme s;
  s.kind = kind;
  s.outer_length = cfg.outer_length;

  if (kind == InnerKind::CC) {
    s.block_length = 1;
    s.label_bits = 1;
    s.memory = 2;
  } else {
    if (!cfg.codebook_file.empty()) {
      s.codebooks = load_codebook_file(cfg.codebook_file);
    } else if (kind == InnerKind::WM) {
      s.codebooks = {builtin_wm_codebook()};
    } else {
      s.codebooks = builtin_tvc_codebooks();
    }
    const int t = kind == InnerKind::WM ? 1 : 4;
    if (static_cast<int>(s.codebooks.size()) < t)
      throw std::invalid_argument("make_scheme: scheme needs " + std::to_string(t) + " codebooks");
    s.codebooks.resize(static_cast<std::size_t>(t));
    s.block_length = s.codebooks[0].word_length;
    s.label_bits = s.codebooks[0].label_bits;
    for (const Codebook& cb : s.codebooks) {
      cb.validate();
      if (cb.word_length != s.block_length || cb.label_bits != s.label_bits)
        throw std::invalid_argument("make_scheme: codebooks disagree on (n, k)");
      if (cfg.strict && codebook_min_levenshtein(cb) < 4)
        throw std::invalid_argument("make_scheme: strict mode needs min edit distance >= 4");
    }

    s.pattern.assign(static_cast<std::size_t>(s.steps()), 0);
    if (kind == InnerKind::TVC2) {
      for (int i = 0; i < s.steps(); ++i) s.pattern[static_cast<std::size_t>(i)] = i % t;
    } else if (kind == InnerKind::TVC1) {
      Rng rng(sub_seed(cfg.seed, 1));
      int prev = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(t)));
      s.pattern[0] = prev;
      for (int i = 1; i < s.steps(); ++i) {
        prev = (prev + 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(t - 1)))) % t;
        s.pattern[static_cast<std::size_t>(i)] = prev;
      }
    }
  }

  const bool scheme_default = kind != InnerKind::TVC1;
  const bool use_offset = cfg.offset < 0 ? scheme_default : cfg.offset != 0;
  if (use_offset)
    s.offset = offset_sequence(sub_seed(cfg.seed, 0), s.dna_length(), s.q);
  else
    s.offset.assign(static_cast<std::size_t>(s.dna_length()), 0);
  return s;
}

DnaSequence encode(const InnerScheme& scheme, const std::vector<int>& w) {
  if (static_cast<int>(w.size()) != scheme.outer_length)
    throw std::invalid_argument("encode: expected N_o outer symbols");
  DnaSequence x;
  x.reserve(static_cast<std::size_t>(scheme.dna_length()));
  int state = 0;
  for (int i = 0; i < scheme.steps(); ++i) {
    const int input = i < scheme.outer_length ? w[static_cast<std::size_t>(i)] : 0;
    const DnaSequence blk = scheme.block(i, state, input);
    x.insert(x.end(), blk.begin(), blk.end());
    state = scheme.next_state(state, input);
  }
  return x;
}

}  // namespace dnafb
