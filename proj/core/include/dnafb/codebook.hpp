#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dnafb/channel.hpp"

namespace dnafb {

/// A block inner codebook: 2^label_bits words of word_length symbols over
/// an alphabet of size q.
struct Codebook {
  int id = 0;
  int word_length = 0;
  int label_bits = 0;
  int q = 4;
  std::vector<DnaSequence> words;

  int size() const { return static_cast<int>(words.size()); }

  /// Checks entry count, word lengths, symbol range and pairwise distinctness.
  void validate() const;
};

/// Standard edit distance (unit-cost insertions, deletions, substitutions).
int levenshtein(const DnaSequence& a, const DnaSequence& b);

/// Minimum pairwise edit distance over distinct codewords; needs >= 2 entries.
int codebook_min_levenshtein(const Codebook& cb);

/// Line-oriented codebook file:
///   codebook <id> n=<n> k=<k>
///   <label> <word>            (2^k lines, word over {A,C,G,T} or {0..3})
std::vector<Codebook> parse_codebook_file(std::istream& in);
std::vector<Codebook> load_codebook_file(const std::string& path);
void write_codebook_file(std::ostream& out, const std::vector<Codebook>& books);

/// The four 16-entry, length-4 quaternary codebooks used by the TVC schemes
/// (alternated as CB1..CB4), plus the watermark default below. Shipped in
/// data/tvc_codebooks.cb as well.
std::vector<Codebook> builtin_tvc_codebooks();

/// The sparse watermark codebook: the 16 lowest-weight length-8 bit strings
/// (ties broken by numeric order), mapped to 4 quaternary symbols.
Codebook builtin_wm_codebook();

/// Seeded greedy fallback: `count` codebooks of 2^label_bits words with
/// minimum pairwise edit distance >= min_distance within each book.
std::vector<Codebook> greedy_codebooks(int count, int word_length, int label_bits,
                                       int q, int min_distance, std::uint64_t seed);

}  // namespace dnafb
