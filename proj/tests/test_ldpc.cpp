#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "dnafb/gf.hpp"
#include "dnafb/ldpc.hpp"
#include "dnafb/rng.hpp"

using namespace dnafb;

TEST_CASE("GF(16) arithmetic under x^4 + x + 1") {
  const GaloisField gf(4);
  CHECK(gf.mul(2, 8) == 3);  // x * x^3 = x^4 = x + 1
  CHECK(gf.mul(0, 9) == 0);
  CHECK_THROWS(gf.inv(0));
  for (int a = 0; a < 16; ++a) {
    CHECK(gf.add(a, a) == 0);
    if (a != 0) CHECK(gf.mul(a, gf.inv(a)) == 1);
    for (int b = 0; b < 16; ++b) {
      CHECK(gf.mul(a, b) == gf.mul(b, a));
      for (int c = 0; c < 16; ++c) {
        CHECK(gf.mul(a, gf.mul(b, c)) == gf.mul(gf.mul(a, b), c));
        CHECK(gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b), gf.mul(a, c)));
      }
    }
  }
}

TEST_CASE("pinned base matrices") {
  const BaseMatrix b1 = BaseMatrix::b1();
  const BaseMatrix b2 = BaseMatrix::b2();
  REQUIRE(b1.rows == 3);
  REQUIRE(b1.cols == 6);
  REQUIRE(b2.rows == 3);
  REQUIRE(b2.cols == 6);
  const int e1[18] = {1, 1, 0, 0, 0, 3, 0, 1, 1, 2, 1, 0, 1, 1, 1, 0, 1, 1};
  const int e2[18] = {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 0};
  for (int i = 0; i < 18; ++i) {
    CHECK(b1.entries[i] == e1[i]);
    CHECK(b2.entries[i] == e2[i]);
  }
  CHECK(b1.design_rate() == doctest::Approx(0.5));
  CHECK(b2.design_rate() == doctest::Approx(0.5));
  const int c2[6] = {2, 2, 3, 3, 2, 2};
  for (int c = 0; c < 6; ++c) CHECK(b2.col_sum(c) == c2[c]);
}

TEST_CASE("single-entry base lifts to one circulant permutation") {
  const BaseMatrix b{1, 1, {1}};
  const LdpcCode code = lift_protograph(b, 3);
  CHECK(code.length == 3);
  CHECK(code.checks == 3);
  for (const auto& edges : code.check_edges) CHECK(edges.size() == 1);
  for (const auto& edges : code.var_edges) CHECK(edges.size() == 1);
  // all three edges share one circulant shift
  std::set<int> shifts;
  for (int c = 0; c < 3; ++c)
    shifts.insert((c - code.check_edges[c][0].node % 3 + 3) % 3);
  CHECK(shifts.size() == 1);
}

TEST_CASE("lifted weights match the base matrix") {
  for (const BaseMatrix& b : {BaseMatrix::b1(), BaseMatrix::b2()}) {
    const int Q = 8;
    const LdpcCode code = lift_protograph(b, Q);
    for (int bc = 0; bc < b.cols; ++bc)
      for (int v = 0; v < Q; ++v)
        CHECK(static_cast<int>(code.var_edges[bc * Q + v].size()) == b.col_sum(bc));
    for (int br = 0; br < b.rows; ++br) {
      int row_sum = 0;
      for (int bc = 0; bc < b.cols; ++bc) row_sum += b.at(br, bc);
      for (int c = 0; c < Q; ++c)
        CHECK(static_cast<int>(code.check_edges[br * Q + c].size()) == row_sum);
    }
    // blocks are sums of disjoint circulants: no duplicate (check, var) pairs
    std::set<std::pair<int, int>> pairs;
    for (int c = 0; c < code.checks; ++c)
      for (const LdpcEdge& e : code.check_edges[c])
        CHECK(pairs.insert({c, e.node}).second);
  }
  CHECK_THROWS(lift_protograph(BaseMatrix::b1(), 2));  // entry 3 > Q_p
}

TEST_CASE("greedy lifting avoids short cycles at moderate lifting factors") {
  const LdpcCode code = lift_protograph(BaseMatrix::b2(), 40);
  // no 4-cycles: two checks never share two variables
  std::map<std::pair<int, int>, int> shared;
  for (int v = 0; v < code.length; ++v) {
    const auto& edges = code.var_edges[v];
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        auto key = std::minmax(edges[i].node, edges[j].node);
        CHECK(++shared[{key.first, key.second}] <= 1);
      }
  }
}

TEST_CASE("field labels are uniform over the nonzero elements") {
  // hand-built ring graph with plenty of edges; only labeling is under test
  LdpcCode code;
  code.lifting = 1;
  code.length = 6000;
  code.checks = 3000;
  code.check_edges.assign(3000, {});
  code.var_edges.assign(6000, {});
  for (int c = 0; c < 3000; ++c)
    for (int t = 0; t < 4; ++t) {
      const int v = (2 * c + t * 997) % 6000;
      code.check_edges[c].push_back({v, 1});
      code.var_edges[v].push_back({c, 1});
    }
  assign_field_labels(code, 4, 321);
  std::map<int, int> hist;
  int total = 0;
  for (const auto& edges : code.check_edges)
    for (const LdpcEdge& e : edges) {
      REQUIRE(e.label >= 1);
      REQUIRE(e.label <= 15);
      ++hist[e.label];
      ++total;
    }
  const double expect = total / 15.0;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / 15.0));
  for (int x = 1; x <= 15; ++x) CHECK(std::abs(hist[x] - expect) < 4 * sigma);

  // binary case keeps labels at 1
  LdpcCode bin = lift_protograph(BaseMatrix::b2(), 4);
  assign_field_labels(bin, 1, 5);
  for (const auto& edges : bin.check_edges)
    for (const LdpcEdge& e : edges) CHECK(e.label == 1);
}

TEST_CASE("encoding satisfies every parity check") {
  LdpcCode code = lift_protograph(BaseMatrix::b2(), 40);
  assign_field_labels(code, 4, 99);
  prepare_encoder(code);
  CHECK(code.length == 240);
  CHECK(code.dimension >= 120);  // at least Q_p * (n_p - r_p)
  CHECK(code.rate() >= 0.5);

  CHECK(encode_ldpc(code, std::vector<int>(code.dimension, 0)) ==
        std::vector<int>(240, 0));

  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    std::vector<int> u(code.dimension);
    for (int& s : u) s = static_cast<int>(rng.uniform_int(16));
    CHECK(syndrome_zero(code, encode_ldpc(code, u)));
  }
  CHECK_THROWS(encode_ldpc(code, std::vector<int>(code.dimension - 1, 0)));

  // linearity spot check: codewords are closed under addition
  const GaloisField gf(4);
  std::vector<int> u1(code.dimension), u2(code.dimension);
  for (int& s : u1) s = static_cast<int>(rng.uniform_int(16));
  for (int& s : u2) s = static_cast<int>(rng.uniform_int(16));
  const std::vector<int> w1 = encode_ldpc(code, u1), w2 = encode_ldpc(code, u2);
  std::vector<int> w3(w1.size());
  for (std::size_t i = 0; i < w1.size(); ++i) w3[i] = gf.add(w1[i], w2[i]);
  CHECK(syndrome_zero(code, w3));
}

namespace {

LdpcCode small_gf4_code() {
  LdpcCode code = lift_protograph(BaseMatrix::b2(), 2);
  assign_field_labels(code, 2, 7);
  prepare_encoder(code);
  return code;
}

std::vector<std::vector<int>> all_codewords(const LdpcCode& code) {
  std::vector<std::vector<int>> words;
  const int q = code.order();
  std::vector<int> u(code.dimension, 0);
  for (;;) {
    words.push_back(encode_ldpc(code, u));
    int i = 0;
    while (i < code.dimension && ++u[i] == q) u[i++] = 0;
    if (i == code.dimension) break;
  }
  return words;
}

}  // namespace

TEST_CASE("belief propagation on a codeword converges instantly") {
  LdpcCode code = small_gf4_code();
  Rng rng(5);
  std::vector<int> u(code.dimension);
  for (int& s : u) s = static_cast<int>(rng.uniform_int(4));
  const std::vector<int> w = encode_ldpc(code, u);
  std::vector<std::vector<double>> priors(code.length, std::vector<double>(4, 1e-12));
  for (int v = 0; v < code.length; ++v) priors[v][w[v]] = 1.0;
  const BpResult r = decode_bp(code, priors, 100);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.hard == w);
  for (const auto& row : r.posteriors) {
    double s = 0.0;
    for (double x : row) s += x;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("belief propagation corrects weak perturbations like ML does") {
  LdpcCode code = small_gf4_code();
  const auto words = all_codewords(code);
  REQUIRE(words.size() <= 1u << 20);

  Rng rng(77);
  int agree = 0, total = 0;
  for (int t = 0; t < 40; ++t) {
    std::vector<int> u(code.dimension);
    for (int& s : u) s = static_cast<int>(rng.uniform_int(4));
    const std::vector<int> w = encode_ldpc(code, u);
    // mildly noisy priors centered on the codeword
    std::vector<std::vector<double>> priors(code.length, std::vector<double>(4));
    for (int v = 0; v < code.length; ++v) {
      for (int x = 0; x < 4; ++x) priors[v][x] = 0.05 + 0.1 * rng.uniform();
      priors[v][w[v]] += 1.0;
      double s = 0.0;
      for (double x : priors[v]) s += x;
      for (double& x : priors[v]) x /= s;
    }
    const BpResult r = decode_bp(code, priors, 100);
    // exhaustive ML over all codewords of the small code
    double best = -1e300;
    const std::vector<int>* ml = nullptr;
    for (const auto& cand : words) {
      double ll = 0.0;
      for (int v = 0; v < code.length; ++v) ll += std::log(priors[v][cand[v]]);
      if (ll > best) {
        best = ll;
        ml = &cand;
      }
    }
    ++total;
    agree += (r.hard == *ml && r.hard == w);
  }
  CHECK(agree >= total - 2);
}

TEST_CASE("flatter priors never help") {
  LdpcCode code = small_gf4_code();
  Rng rng(13);
  int errs_sharp = 0, errs_flat = 0;
  for (int t = 0; t < 120; ++t) {
    std::vector<int> u(code.dimension);
    for (int& s : u) s = static_cast<int>(rng.uniform_int(4));
    const std::vector<int> w = encode_ldpc(code, u);
    std::vector<std::vector<double>> sharp(code.length, std::vector<double>(4)), flat;
    for (int v = 0; v < code.length; ++v) {
      for (int x = 0; x < 4; ++x) sharp[v][x] = 0.03 + 0.3 * rng.uniform();
      sharp[v][w[v]] += 0.8;
      double s = 0.0;
      for (double x : sharp[v]) s += x;
      for (double& x : sharp[v]) x /= s;
    }
    flat = sharp;
    for (auto& row : flat)
      for (double& x : row) x = 0.5 * x + 0.5 * 0.25;  // blend toward uniform
    errs_sharp += decode_bp(code, sharp, 50).hard != w;
    errs_flat += decode_bp(code, flat, 50).hard != w;
  }
  CHECK(errs_sharp <= errs_flat);
}

TEST_CASE("base matrix file loading") {
  const std::string path = "test_base.txt";
  {
    std::ofstream f(path);
    f << "# comment\n1 1 0 0 0 3\n0 1 1 2 1 0\n1 1 1 0 1 1\n";
  }
  const BaseMatrix b = BaseMatrix::from_file(path);
  CHECK(b.entries == BaseMatrix::b1().entries);
  std::remove(path.c_str());
  CHECK_THROWS(BaseMatrix::from_file("nope.txt"));
}
