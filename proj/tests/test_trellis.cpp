#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "dnafb/channel.hpp"
#include "dnafb/inner.hpp"
#include "dnafb/rng.hpp"
#include "dnafb/trellis.hpp"
#include "support/oracle.hpp"

using namespace dnafb;

namespace {

ChannelParams ids(double pi, double pd, double ps, int q = 4) {
  ChannelParams p;
  p.p_ins = pi;
  p.p_del = pd;
  p.p_sub = ps;
  p.alphabet_size = q;
  return p;
}

// 4-entry length-2 quaternary codebook (k = 2), distinct words.
Codebook tiny_codebook() {
  Codebook cb;
  cb.id = 1;
  cb.word_length = 2;
  cb.label_bits = 2;
  cb.words = {{0, 3}, {1, 1}, {2, 0}, {3, 2}};
  return cb;
}

InnerScheme tiny_wm(int outer_length, const Codebook& cb = tiny_codebook(),
                    int offset = 0, std::uint64_t seed = 0) {
  static int counter = 0;
  const std::string path = "tiny_wm_" + std::to_string(counter++) + ".cb";
  {
    std::ofstream f(path);
    write_codebook_file(f, {cb});
  }
  InnerConfig cfg;
  cfg.outer_length = outer_length;
  cfg.codebook_file = path;
  cfg.offset = offset;
  cfg.seed = seed;
  const InnerScheme s = make_scheme(InnerKind::WM, cfg);
  std::remove(path.c_str());
  return s;
}

std::vector<std::vector<double>> uniform_priors(const InnerScheme& s) {
  return std::vector<std::vector<double>>(
      static_cast<std::size_t>(s.outer_length),
      std::vector<double>(static_cast<std::size_t>(s.num_inputs()),
                          1.0 / s.num_inputs()));
}

}  // namespace

TEST_CASE("branch metric basics") {
  const ChannelParams clean = ids(0.0, 0.0, 0.0);
  const DnaSequence blk = {0, 1, 2, 3};
  CHECK(branch_metric(blk, blk, 0, 0, clean, 2) == doctest::Approx(1.0));

  const ChannelParams del_only = ids(0.0, 0.3, 0.0);
  CHECK(branch_metric({0}, {}, 0, -1, del_only, 2) == doctest::Approx(0.3));
  CHECK_THROWS(branch_metric({0}, {0, 1}, 0, 0, del_only, 2));
  // more output than the insertion cap allows
  CHECK(branch_metric({0}, {0, 1, 2, 3}, 0, 3, ids(0.2, 0.1, 0.0), 2) == 0.0);
}

TEST_CASE("branch metric equals exhaustive event enumeration") {
  const ChannelParams p = ids(0.1, 0.1, 0.05);
  const DnaSequence blk = {0, 2, 1};
  const auto dist = oracle::output_distribution(blk, p, 2);
  for (const auto& [y, prob] : dist) {
    const int dp = static_cast<int>(y.size()) - static_cast<int>(blk.size());
    CHECK(branch_metric(blk, y, 0, dp, p, 2) == doctest::Approx(prob).epsilon(1e-12));
  }
}

TEST_CASE("tiny instance matches the exhaustive Bayes oracle") {
  const InnerScheme scheme = tiny_wm(2);
  const ChannelParams p = ids(0.1, 0.1, 0.05);
  const TrellisSpec spec = make_trellis(scheme, p, 12, 2);  // full window

  Rng mk(17);
  int checked = 0;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<int> w = {static_cast<int>(mk.uniform_int(4)), static_cast<int>(mk.uniform_int(4))};
    const DnaSequence x = encode(scheme, w);
    auto [y, trace] = transmit(x, p, 5000 + trial);
    if (std::abs(trace.final_drift()) > 12) continue;
    // the decoder caps runs of insertions; skip the rare frames beyond it
    const oracle::Joint ref = oracle::joint(scheme, w, {y}, p, 2);
    if (ref.pwy == 0.0) continue;
    ++checked;

    TrellisEngine engine(spec, {y});
    REQUIRE(engine.valid());
    const JointForwardResult jf = engine.joint_forward(w);
    REQUIRE(jf.ok);
    CHECK(jf.log2_py == doctest::Approx(std::log2(ref.py)).epsilon(1e-10));
    CHECK(jf.log2_pwy == doctest::Approx(std::log2(ref.pwy)).epsilon(1e-10));

    const ForwardResult fw = engine.forward(uniform_priors(scheme));
    CHECK(fw.log2_py == doctest::Approx(std::log2(ref.py)).epsilon(1e-10));
    const ForwardResult cf = engine.constrained_forward(uniform_priors(scheme), w);
    CHECK(cf.log2_py == doctest::Approx(std::log2(ref.pwy)).epsilon(1e-10));

    const AppResult app = engine.posteriors(uniform_priors(scheme));
    REQUIRE(app.ok);
    for (int i = 0; i < 2; ++i) {
      double row_sum = 0.0;
      for (int v = 0; v < 4; ++v) {
        CHECK(app.app[i][v] == doctest::Approx(ref.app[i][v]).epsilon(1e-10));
        row_sum += app.app[i][v];
      }
      CHECK(row_sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(checked >= 15);
}

TEST_CASE("joint two-read decoding matches the exhaustive oracle") {
  const InnerScheme scheme = tiny_wm(2);
  const ChannelParams p = ids(0.1, 0.1, 0.0);
  const TrellisSpec spec = make_trellis(scheme, p, 8, 2);
  Rng mk(31);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<int> w = {static_cast<int>(mk.uniform_int(4)), static_cast<int>(mk.uniform_int(4))};
    const DnaSequence x = encode(scheme, w);
    const ReadSet rs = transmit_multi(x, p, 2, 7100 + trial);
    bool in_window = true;
    for (const auto& tr : rs.traces) in_window = in_window && std::abs(tr.final_drift()) <= 8;
    if (!in_window) continue;
    const oracle::Joint ref = oracle::joint(scheme, w, rs.reads, p, 2);
    if (ref.pwy == 0.0 || ref.py == 0.0) continue;
    ++checked;

    TrellisEngine engine(spec, rs.reads);
    const JointForwardResult jf = engine.joint_forward(w);
    REQUIRE(jf.ok);
    CHECK(jf.log2_py == doctest::Approx(std::log2(ref.py)).epsilon(1e-10));
    CHECK(jf.log2_pwy == doctest::Approx(std::log2(ref.pwy)).epsilon(1e-10));
    const AppResult app = engine.posteriors(uniform_priors(scheme));
    REQUIRE(app.ok);
    for (int i = 0; i < 2; ++i)
      for (int v = 0; v < 4; ++v)
        CHECK(app.app[i][v] == doctest::Approx(ref.app[i][v]).epsilon(1e-9));
  }
  CHECK(checked >= 6);
}

TEST_CASE("convolutional trellis matches the exhaustive oracle") {
  InnerConfig cfg;
  cfg.outer_length = 3;
  cfg.offset = 1;
  cfg.seed = 9;
  const InnerScheme cc = make_scheme(InnerKind::CC, cfg);
  const ChannelParams p = ids(0.1, 0.1, 0.05);
  const TrellisSpec spec = make_trellis(cc, p, 6, 2);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng mk(800 + trial);
    std::vector<int> w = {static_cast<int>(mk.uniform_int(2)), static_cast<int>(mk.uniform_int(2)),
                          static_cast<int>(mk.uniform_int(2))};
    auto [y, trace] = transmit(encode(cc, w), p, 9300 + trial);
    if (std::abs(trace.final_drift()) > 6) continue;
    const oracle::Joint ref = oracle::joint(cc, w, {y}, p, 2);
    if (ref.pwy == 0.0) continue;
    ++checked;
    TrellisEngine engine(spec, {y});
    const JointForwardResult jf = engine.joint_forward(w);
    REQUIRE(jf.ok);
    CHECK(jf.log2_py == doctest::Approx(std::log2(ref.py)).epsilon(1e-10));
    CHECK(jf.log2_pwy == doctest::Approx(std::log2(ref.pwy)).epsilon(1e-10));
    const AppResult app = engine.posteriors(uniform_priors(cc));
    REQUIRE(app.ok);
    for (int i = 0; i < 3; ++i)
      for (int v = 0; v < 2; ++v)
        CHECK(app.app[i][v] == doctest::Approx(ref.app[i][v]).epsilon(1e-9));
  }
  CHECK(checked >= 12);
}

TEST_CASE("noiseless decoding is exact") {
  for (int offset : {0, 1}) {
    const InnerScheme scheme = tiny_wm(4, tiny_codebook(), offset, 77);
    const ChannelParams p = ids(0.0, 0.0, 0.0);
    const TrellisSpec spec = make_trellis(scheme, p);
    std::vector<int> w = {2, 0, 3, 1};
    const DnaSequence x = encode(scheme, w);
    TrellisEngine engine(spec, {x});
    const JointForwardResult jf = engine.joint_forward(w);
    REQUIRE(jf.ok);
    // exact equality: every per-step factor is a power of two
    CHECK(jf.log2_py == -8.0);  // -N_o * log2 q_o
    CHECK(jf.log2_pwy == -8.0);
    const AppResult app = engine.posteriors(uniform_priors(scheme));
    for (int i = 0; i < 4; ++i) {
      CHECK(app.app[i][w[i]] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("forward-backward mass is boundary-independent") {
  const InnerScheme scheme = tiny_wm(5);
  const ChannelParams p = ids(0.08, 0.12, 0.05);
  const TrellisSpec spec = make_trellis(scheme, p, 10, 2);
  for (int trial = 0; trial < 10; ++trial) {
    Rng mk(50 + trial);
    std::vector<int> w(5);
    for (int& v : w) v = static_cast<int>(mk.uniform_int(4));
    auto [y, trace] = transmit(encode(scheme, w), p, 60 + trial);
    if (std::abs(trace.final_drift()) > 10) continue;
    TrellisEngine engine(spec, {y});
    const AppResult app = engine.posteriors(uniform_priors(scheme));
    if (!app.ok) continue;
    for (double m : app.boundary_log2_mass)
      CHECK(m == doctest::Approx(app.log2_py).epsilon(1e-9));
  }
}

TEST_CASE("total output mass under the capped model") {
  // Sum of p(y) over every reachable y equals (1 - p_ins^(cap+1))^N.
  Codebook cb;
  cb.id = 1;
  cb.word_length = 1;
  cb.label_bits = 1;
  cb.words = {{0}, {3}};
  const InnerScheme scheme = tiny_wm(2, cb);
  const ChannelParams p = ids(0.2, 0.15, 0.1);
  const TrellisSpec spec = make_trellis(scheme, p, 6, 2);

  std::set<DnaSequence> ys;
  for (int w0 = 0; w0 < 2; ++w0)
    for (int w1 = 0; w1 < 2; ++w1)
      for (const auto& [y, prob] : oracle::output_distribution(
               encode(scheme, {w0, w1}), p, 2))
        ys.insert(y);
  double total = 0.0;
  for (const DnaSequence& y : ys) {
    TrellisEngine engine(spec, {y});
    REQUIRE(engine.valid());
    const ForwardResult fw = engine.forward(uniform_priors(scheme));
    if (fw.ok) total += std::exp2(fw.log2_py);
  }
  const double expect = std::pow(1.0 - std::pow(p.p_ins, 3), 2);
  CHECK(total == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("widening the window or the insertion cap never loses mass") {
  const InnerScheme scheme = tiny_wm(3);
  const ChannelParams p = ids(0.15, 0.15, 0.05);
  std::vector<int> w = {1, 3, 0};
  auto [y, trace] = transmit(encode(scheme, w), p, 2024);

  double prev = -1e300;
  for (int D = std::abs(trace.final_drift()); D <= 8; ++D) {
    TrellisEngine engine(make_trellis(scheme, p, D, 2), {y});
    const ForwardResult fw = engine.forward(uniform_priors(scheme));
    if (!fw.ok) continue;
    CHECK(fw.log2_py >= prev - 1e-9);
    prev = fw.log2_py;
  }
  prev = -1e300;
  for (int cap = 1; cap <= 4; ++cap) {
    TrellisEngine engine(make_trellis(scheme, p, 8, cap), {y});
    const ForwardResult fw = engine.forward(uniform_priors(scheme));
    if (!fw.ok) continue;
    CHECK(fw.log2_py >= prev - 1e-9);
    prev = fw.log2_py;
  }
}

TEST_CASE("out-of-window reads are flagged, not decoded") {
  const InnerScheme scheme = tiny_wm(2);
  const ChannelParams p = ids(0.1, 0.1, 0.0);
  const TrellisSpec spec = make_trellis(scheme, p, 1, 2);
  TrellisEngine engine(spec, {DnaSequence(10, 0)});  // drift +6 with window 1
  CHECK(!engine.valid());
  const ForwardResult fw = engine.forward(uniform_priors(scheme));
  CHECK(!fw.ok);
}

TEST_CASE("a pinned noiseless second read sharpens the posterior") {
  const InnerScheme scheme = tiny_wm(3);
  const ChannelParams p = ids(0.1, 0.1, 0.05);
  const TrellisSpec spec = make_trellis(scheme, p, 8, 2);
  double gain = 0.0;
  int counted = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Rng mk(300 + trial);
    std::vector<int> w(3);
    for (int& v : w) v = static_cast<int>(mk.uniform_int(4));
    const DnaSequence x = encode(scheme, w);
    auto [y, trace] = transmit(x, p, 4000 + trial);
    if (std::abs(trace.final_drift()) > 8) continue;

    TrellisEngine one(spec, {y});
    TrellisEngine two(spec, {y, x});  // second read through a noiseless leg
    const AppResult a1 = one.posteriors(uniform_priors(scheme));
    const AppResult a2 = two.posteriors(uniform_priors(scheme));
    if (!a1.ok || !a2.ok) continue;
    ++counted;
    for (int i = 0; i < 3; ++i)
      gain += a2.app[i][w[i]] - a1.app[i][w[i]];
  }
  REQUIRE(counted >= 20);
  CHECK(gain > 0.0);
}
