#include "dnafb/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dnafb/rng.hpp"

namespace dnafb {

int BaseMatrix::col_sum(int c) const {
  int s = 0;
  for (int r = 0; r < rows; ++r) s += at(r, c);
  return s;
}

void BaseMatrix::validate() const {
  if (rows < 1 || cols < rows) throw std::invalid_argument("base matrix: need cols >= rows >= 1");
  if (static_cast<int>(entries.size()) != rows * cols)
    throw std::invalid_argument("base matrix: entry count mismatch");
  for (int e : entries)
    if (e < 0) throw std::invalid_argument("base matrix: negative entry");
}

BaseMatrix BaseMatrix::b1() {
  return {3, 6, {1, 1, 0, 0, 0, 3,
                 0, 1, 1, 2, 1, 0,
                 1, 1, 1, 0, 1, 1}};
}

BaseMatrix BaseMatrix::b2() {
  return {3, 6, {0, 1, 1, 1, 1, 1,
                 1, 1, 1, 1, 1, 1,
                 1, 0, 1, 1, 0, 0}};
}

BaseMatrix BaseMatrix::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open base matrix file: " + path);
  BaseMatrix b;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<int> row;
    int v;
    while (ls >> v) row.push_back(v);
    if (row.empty()) continue;
    if (b.cols == 0) b.cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != b.cols)
      throw std::runtime_error("base matrix file: ragged rows");
    b.entries.insert(b.entries.end(), row.begin(), row.end());
    ++b.rows;
  }
  b.validate();
  return b;
}

namespace {

// Shortest path length (in edges) between a check and a variable in the
// current Tanner graph; -1 when disconnected.
int tanner_distance(const LdpcCode& code, int check, int var) {
  std::vector<int> dist_c(static_cast<std::size_t>(code.checks), -1);
  std::vector<int> dist_v(static_cast<std::size_t>(code.length), -1);
  std::deque<std::pair<bool, int>> q;  // (is_check, node)
  dist_c[static_cast<std::size_t>(check)] = 0;
  q.emplace_back(true, check);
  while (!q.empty()) {
    auto [is_check, node] = q.front();
    q.pop_front();
    if (is_check) {
      const int d = dist_c[static_cast<std::size_t>(node)];
      for (const LdpcEdge& e : code.check_edges[static_cast<std::size_t>(node)]) {
        if (dist_v[static_cast<std::size_t>(e.node)] >= 0) continue;
        if (e.node == var) return d + 1;
        dist_v[static_cast<std::size_t>(e.node)] = d + 1;
        q.emplace_back(false, e.node);
      }
    } else {
      const int d = dist_v[static_cast<std::size_t>(node)];
      for (const LdpcEdge& e : code.var_edges[static_cast<std::size_t>(node)]) {
        if (dist_c[static_cast<std::size_t>(e.node)] >= 0) continue;
        dist_c[static_cast<std::size_t>(e.node)] = d + 1;
        q.emplace_back(true, e.node);
      }
    }
  }
  return -1;
}

void add_circulant(LdpcCode& code, int br, int bc, int shift) {
  const int Q = code.lifting;
  for (int v = 0; v < Q; ++v) {
    const int var = bc * Q + v;
    const int check = br * Q + (v + shift) % Q;
    code.check_edges[static_cast<std::size_t>(check)].push_back({var, 1});
    code.var_edges[static_cast<std::size_t>(var)].push_back({check, 1});
  }
}

}  // namespace

LdpcCode lift_protograph(const BaseMatrix& base, int lifting, std::uint64_t /*seed*/) {
  base.validate();
  if (lifting < 1) throw std::invalid_argument("lift_protograph: lifting must be >= 1");
  for (int e : base.entries)
    if (e > lifting) throw std::invalid_argument("lift_protograph: entry exceeds lifting factor");
  LdpcCode code;
  code.lifting = lifting;
  code.length = lifting * base.cols;
  code.checks = lifting * base.rows;
  code.check_edges.assign(static_cast<std::size_t>(code.checks), {});
  code.var_edges.assign(static_cast<std::size_t>(code.length), {});

  for (int br = 0; br < base.rows; ++br) {
    for (int bc = 0; bc < base.cols; ++bc) {
      std::vector<int> used;
      for (int copy = 0; copy < base.at(br, bc); ++copy) {
        // Circulant structure makes every lifted copy of a candidate edge
        // equivalent, so one representative (variable offset 0) is scored.
        int best_shift = -1, best_dist = -2;
        for (int shift = 0; shift < lifting; ++shift) {
          if (std::find(used.begin(), used.end(), shift) != used.end()) continue;
          const int var = bc * lifting;
          const int check = br * lifting + shift;
          int d = tanner_distance(code, check, var);
          if (d < 0) d = 1 << 28;  // disconnected beats any finite girth
          if (d > best_dist) {
            best_dist = d;
            best_shift = shift;
          }
        }
        if (best_shift < 0)
          throw std::invalid_argument("lift_protograph: not enough distinct shifts");
        used.push_back(best_shift);
        add_circulant(code, br, bc, best_shift);
      }
    }
  }
  return code;
}

void assign_field_labels(LdpcCode& code, int field_bits, std::uint64_t seed) {
  code.field_bits = field_bits;
  if (field_bits == 1) return;  // binary: all labels stay 1
  const int q = code.order();
  Rng rng(seed);
  for (int c = 0; c < code.checks; ++c) {
    for (LdpcEdge& e : code.check_edges[static_cast<std::size_t>(c)]) {
      e.label = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(q - 1)));
      for (LdpcEdge& back : code.var_edges[static_cast<std::size_t>(e.node)])
        if (back.node == c && back.label == 1) {
          back.label = e.label;
          break;
        }
    }
  }
}

void prepare_encoder(LdpcCode& code) {
  const GaloisField gf(code.field_bits);
  const int m = code.checks, n = code.length;
  std::vector<std::vector<int>> H(static_cast<std::size_t>(m),
                                  std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int c = 0; c < m; ++c)
    for (const LdpcEdge& e : code.check_edges[static_cast<std::size_t>(c)])
      H[static_cast<std::size_t>(c)][static_cast<std::size_t>(e.node)] =
          gf.add(H[static_cast<std::size_t>(c)][static_cast<std::size_t>(e.node)], e.label);

  // Reduced row echelon form over GF(q_o).
  std::vector<int> pivot_col_of_row;
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int pr = -1;
    for (int r = rank; r < m; ++r)
      if (H[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) { pr = r; break; }
    if (pr < 0) continue;
    std::swap(H[static_cast<std::size_t>(pr)], H[static_cast<std::size_t>(rank)]);
    const int inv = gf.inv(H[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)]);
    for (int c2 = col; c2 < n; ++c2)
      H[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c2)] =
          gf.mul(H[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c2)], inv);
    for (int r = 0; r < m; ++r) {
      if (r == rank) continue;
      const int f = H[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int c2 = col; c2 < n; ++c2)
        H[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] =
            gf.add(H[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)],
                   gf.mul(f, H[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c2)]));
    }
    pivot_col_of_row.push_back(col);
    ++rank;
  }

  code.pivot_cols = pivot_col_of_row;
  code.dimension = n - rank;
  code.message_cols.clear();
  std::vector<int> msg_index(static_cast<std::size_t>(n), -1);
  {
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int c : code.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
    for (int c = 0; c < n; ++c)
      if (!is_pivot[static_cast<std::size_t>(c)]) {
        msg_index[static_cast<std::size_t>(c)] = static_cast<int>(code.message_cols.size());
        code.message_cols.push_back(c);
      }
  }
  code.pivot_expr.assign(static_cast<std::size_t>(rank), {});
  for (int r = 0; r < rank; ++r)
    for (int c = 0; c < n; ++c) {
      const int v = H[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (v != 0 && msg_index[static_cast<std::size_t>(c)] >= 0)
        code.pivot_expr[static_cast<std::size_t>(r)].push_back({msg_index[static_cast<std::size_t>(c)], v});
    }
}

std::vector<int> encode_ldpc(const LdpcCode& code, const std::vector<int>& message) {
  if (code.pivot_expr.empty() && code.dimension == 0)
    throw std::logic_error("encode_ldpc: call prepare_encoder first");
  if (static_cast<int>(message.size()) != code.dimension)
    throw std::invalid_argument("encode_ldpc: message length mismatch");
  const GaloisField gf(code.field_bits);
  std::vector<int> w(static_cast<std::size_t>(code.length), 0);
  for (std::size_t i = 0; i < code.message_cols.size(); ++i) {
    const int sym = message[i];
    if (sym < 0 || sym >= code.order())
      throw std::invalid_argument("encode_ldpc: symbol out of field range");
    w[static_cast<std::size_t>(code.message_cols[i])] = sym;
  }
  // In characteristic 2 the pivot value is the plain sum of its free terms.
  for (std::size_t r = 0; r < code.pivot_cols.size(); ++r) {
    int acc = 0;
    for (const LdpcEdge& t : code.pivot_expr[r])
      acc = gf.add(acc, gf.mul(t.label, message[static_cast<std::size_t>(t.node)]));
    w[static_cast<std::size_t>(code.pivot_cols[r])] = acc;
  }
  return w;
}

std::vector<int> syndrome(const LdpcCode& code, const std::vector<int>& word) {
  if (static_cast<int>(word.size()) != code.length)
    throw std::invalid_argument("syndrome: word length mismatch");
  const GaloisField gf(code.field_bits);
  std::vector<int> s(static_cast<std::size_t>(code.checks), 0);
  for (int c = 0; c < code.checks; ++c)
    for (const LdpcEdge& e : code.check_edges[static_cast<std::size_t>(c)])
      s[static_cast<std::size_t>(c)] = gf.add(
          s[static_cast<std::size_t>(c)],
          gf.mul(e.label, word[static_cast<std::size_t>(e.node)]));
  return s;
}

bool syndrome_zero(const LdpcCode& code, const std::vector<int>& word) {
  const std::vector<int> s = syndrome(code, word);
  return std::all_of(s.begin(), s.end(), [](int v) { return v == 0; });
}

namespace {

constexpr double kFloor = 1e-12;

void hadamard(std::vector<double>& v) {
  const std::size_t q = v.size();
  for (std::size_t h = 1; h < q; h <<= 1)
    for (std::size_t i = 0; i < q; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

void normalize_floor(std::vector<double>& v) {
  double s = 0.0;
  for (double& x : v) {
    if (!(x > kFloor)) x = kFloor;
    s += x;
  }
  for (double& x : v) x /= s;
}

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

BpResult decode_bp(const LdpcCode& code, const std::vector<std::vector<double>>& priors,
                   int max_iter) {
  if (static_cast<int>(priors.size()) != code.length)
    throw std::invalid_argument("decode_bp: need one prior row per symbol");
  const GaloisField gf(code.field_bits);
  const int q = code.order();
  BpResult out;
  out.posteriors = priors;
  out.extrinsics.assign(static_cast<std::size_t>(code.length),
                        std::vector<double>(static_cast<std::size_t>(q), 1.0 / q));
  out.hard.resize(static_cast<std::size_t>(code.length));
  for (int v = 0; v < code.length; ++v) out.hard[static_cast<std::size_t>(v)] = argmax(priors[static_cast<std::size_t>(v)]);
  if (syndrome_zero(code, out.hard)) {
    out.converged = true;
    return out;
  }

  // Edge storage keyed by check-side order; var side keeps (check, slot).
  std::vector<std::vector<int>> var_slot(static_cast<std::size_t>(code.length));
  std::vector<std::vector<std::vector<double>>> v2c(static_cast<std::size_t>(code.checks)),
      c2v(static_cast<std::size_t>(code.checks));
  for (int c = 0; c < code.checks; ++c) {
    const std::size_t deg = code.check_edges[static_cast<std::size_t>(c)].size();
    v2c[static_cast<std::size_t>(c)].assign(deg, std::vector<double>(static_cast<std::size_t>(q)));
    c2v[static_cast<std::size_t>(c)].assign(deg, std::vector<double>(static_cast<std::size_t>(q), 1.0 / q));
  }
  for (int v = 0; v < code.length; ++v) {
    const auto& ve = code.var_edges[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < ve.size(); ++i) {
      // Parallel edges between the same pair pair up in traversal order.
      std::size_t k = 0;
      for (std::size_t j = 0; j < i; ++j)
        if (ve[j].node == ve[i].node) ++k;
      const auto& ce = code.check_edges[static_cast<std::size_t>(ve[i].node)];
      for (std::size_t slot = 0; slot < ce.size(); ++slot)
        if (ce[slot].node == v) {
          if (k == 0) {
            var_slot[static_cast<std::size_t>(v)].push_back(static_cast<int>(slot));
            break;
          }
          --k;
        }
    }
  }

  std::vector<double> work(static_cast<std::size_t>(q)), acc(static_cast<std::size_t>(q));
  for (int it = 1; it <= max_iter; ++it) {
    // Variable-to-check: prior times all other incoming check messages,
    // via prefix/suffix products (no division).
    for (int v = 0; v < code.length; ++v) {
      const auto& edges = code.var_edges[static_cast<std::size_t>(v)];
      const std::size_t deg = edges.size();
      std::vector<std::vector<double>> pre(deg + 1,
                                           std::vector<double>(static_cast<std::size_t>(q), 1.0));
      pre[0] = priors[static_cast<std::size_t>(v)];
      for (std::size_t i = 0; i < deg; ++i) {
        const auto& msg = c2v[static_cast<std::size_t>(edges[i].node)]
                             [static_cast<std::size_t>(var_slot[static_cast<std::size_t>(v)][i])];
        for (int x = 0; x < q; ++x)
          pre[i + 1][static_cast<std::size_t>(x)] =
              pre[i][static_cast<std::size_t>(x)] * msg[static_cast<std::size_t>(x)];
      }
      std::vector<double> suf(static_cast<std::size_t>(q), 1.0);
      for (std::size_t i = deg; i-- > 0;) {
        auto& dst = v2c[static_cast<std::size_t>(edges[i].node)]
                       [static_cast<std::size_t>(var_slot[static_cast<std::size_t>(v)][i])];
        for (int x = 0; x < q; ++x)
          dst[static_cast<std::size_t>(x)] =
              pre[i][static_cast<std::size_t>(x)] * suf[static_cast<std::size_t>(x)];
        normalize_floor(dst);
        const auto& msg = c2v[static_cast<std::size_t>(edges[i].node)]
                             [static_cast<std::size_t>(var_slot[static_cast<std::size_t>(v)][i])];
        for (int x = 0; x < q; ++x) suf[static_cast<std::size_t>(x)] *= msg[static_cast<std::size_t>(x)];
      }
    }

    // Check-to-variable in the transform domain.
    for (int c = 0; c < code.checks; ++c) {
      const auto& edges = code.check_edges[static_cast<std::size_t>(c)];
      const std::size_t deg = edges.size();
      std::vector<std::vector<double>> tr(deg);
      for (std::size_t i = 0; i < deg; ++i) {
        // Distribution of h_e * w_e, then Hadamard transform.
        work.assign(static_cast<std::size_t>(q), 0.0);
        const auto& msg = v2c[static_cast<std::size_t>(c)][i];
        for (int x = 0; x < q; ++x)
          work[static_cast<std::size_t>(gf.mul(edges[i].label, x))] = msg[static_cast<std::size_t>(x)];
        hadamard(work);
        tr[i] = work;
      }
      std::vector<std::vector<double>> pre(deg + 1,
                                           std::vector<double>(static_cast<std::size_t>(q), 1.0));
      for (std::size_t i = 0; i < deg; ++i)
        for (int x = 0; x < q; ++x)
          pre[i + 1][static_cast<std::size_t>(x)] =
              pre[i][static_cast<std::size_t>(x)] * tr[i][static_cast<std::size_t>(x)];
      std::vector<double> suf(static_cast<std::size_t>(q), 1.0);
      for (std::size_t i = deg; i-- > 0;) {
        for (int x = 0; x < q; ++x)
          work[static_cast<std::size_t>(x)] =
              pre[i][static_cast<std::size_t>(x)] * suf[static_cast<std::size_t>(x)];
        hadamard(work);  // self-inverse up to 1/q, absorbed by normalization
        auto& dst = c2v[static_cast<std::size_t>(c)][i];
        for (int x = 0; x < q; ++x)
          dst[static_cast<std::size_t>(x)] =
              work[static_cast<std::size_t>(gf.mul(edges[i].label, x))];
        normalize_floor(dst);
        for (int x = 0; x < q; ++x) suf[static_cast<std::size_t>(x)] *= tr[i][static_cast<std::size_t>(x)];
      }
    }

    // Posteriors, extrinsics, hard decision, early exit.
    for (int v = 0; v < code.length; ++v) {
      const auto& edges = code.var_edges[static_cast<std::size_t>(v)];
      acc.assign(static_cast<std::size_t>(q), 1.0);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& msg = c2v[static_cast<std::size_t>(edges[i].node)]
                             [static_cast<std::size_t>(var_slot[static_cast<std::size_t>(v)][i])];
        for (int x = 0; x < q; ++x) acc[static_cast<std::size_t>(x)] *= msg[static_cast<std::size_t>(x)];
      }
      auto& ext = out.extrinsics[static_cast<std::size_t>(v)];
      ext = acc;
      normalize_floor(ext);
      auto& post = out.posteriors[static_cast<std::size_t>(v)];
      for (int x = 0; x < q; ++x)
        post[static_cast<std::size_t>(x)] =
            acc[static_cast<std::size_t>(x)] * priors[static_cast<std::size_t>(v)][static_cast<std::size_t>(x)];
      normalize_floor(post);
      out.hard[static_cast<std::size_t>(v)] = argmax(post);
    }
    out.iterations = it;
    if (syndrome_zero(code, out.hard)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace dnafb
