#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dnafb/gf.hpp"

namespace dnafb {

struct BaseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> entries;  // row-major

  int at(int r, int c) const { return entries[static_cast<std::size_t>(r * cols + c)]; }
  int col_sum(int c) const;
  double design_rate() const { return static_cast<double>(cols - rows) / cols; }
  void validate() const;

  static BaseMatrix b1();  // pairs with the cc/wm inner schemes
  static BaseMatrix b2();  // pairs with the tvc schemes
  static BaseMatrix from_file(const std::string& path);
};

struct LdpcEdge {
  int node = 0;   // the opposite endpoint
  int label = 1;  // nonzero GF(q_o) coefficient
};

struct LdpcCode {
  int lifting = 0;     // Q_p
  int field_bits = 1;  // k, q_o = 2^k
  int length = 0;      // N_o = Q_p * cols
  int checks = 0;      // Q_p * rows
  std::vector<std::vector<LdpcEdge>> check_edges;  // per check: (var, label)
  std::vector<std::vector<LdpcEdge>> var_edges;    // per var: (check, label)

  // Encoder, filled by prepare_encoder: free columns carry the message.
  int dimension = 0;
  std::vector<int> message_cols;
  std::vector<int> pivot_cols;
  std::vector<std::vector<LdpcEdge>> pivot_expr;  // per pivot: (message index, coeff)

  int order() const { return 1 << field_bits; }
  double rate() const { return static_cast<double>(dimension) / length; }
};

/// Circulant lifting: each base entry b becomes a sum of b distinct circulant
/// permutations, shifts picked greedily to maximize local girth (ties to the
/// smallest shift). Deterministic; labels are all 1 until assign_field_labels.
LdpcCode lift_protograph(const BaseMatrix& base, int lifting, std::uint64_t seed = 0);

/// Uniform nonzero GF(2^k) edge labels; k = 1 keeps every label at 1.
void assign_field_labels(LdpcCode& code, int field_bits, std::uint64_t seed);

/// Gaussian elimination over GF(q_o); fills dimension/message_cols/pivot_expr.
void prepare_encoder(LdpcCode& code);

std::vector<int> encode_ldpc(const LdpcCode& code, const std::vector<int>& message);

std::vector<int> syndrome(const LdpcCode& code, const std::vector<int>& word);
bool syndrome_zero(const LdpcCode& code, const std::vector<int>& word);

struct BpResult {
  std::vector<std::vector<double>> posteriors;  // length x q_o
  std::vector<std::vector<double>> extrinsics;  // length x q_o (prior divided out)
  std::vector<int> hard;
  bool converged = false;
  int iterations = 0;
};

/// Sum-product decoding over symbol distributions; check updates run in the
/// Hadamard transform domain. Stops early once the hard decision satisfies H.
BpResult decode_bp(const LdpcCode& code, const std::vector<std::vector<double>>& priors,
                   int max_iter);

}  // namespace dnafb
