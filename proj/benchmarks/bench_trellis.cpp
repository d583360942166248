#include <benchmark/benchmark.h>

#include "dnafb/info_density.hpp"
#include "dnafb/inner.hpp"
#include "dnafb/rng.hpp"
#include "dnafb/trellis.hpp"

using namespace dnafb;

namespace {

ChannelParams ids(double p) {
  ChannelParams c;
  c.p_ins = p;
  c.p_del = p;
  return c;
}

InnerScheme tvc2_960() {
  InnerConfig cfg;
  cfg.outer_length = 240;  // n = 4 -> N = 960
  cfg.seed = 1;
  return make_scheme(InnerKind::TVC2, cfg);
}

struct Frame {
  InnerScheme scheme = tvc2_960();
  std::vector<int> w;
  std::vector<DnaSequence> reads;
  ChannelParams params;

  explicit Frame(double p) : params(ids(p)) {
    Rng rng(7);
    w.resize(static_cast<std::size_t>(scheme.outer_length));
    for (int& s : w) s = static_cast<int>(rng.uniform_int(16));
    auto [y, trace] = transmit(encode(scheme, w), params, 99);
    reads = {y};
  }
};

}  // namespace

static void BM_BlockLattice(benchmark::State& state) {
  const Frame f(0.05);
  const DnaSequence block = f.scheme.block(0, 0, 5);
  const DnaSequence segment(f.reads[0].begin(), f.reads[0].begin() + 5);
  for (auto _ : state)
    benchmark::DoNotOptimize(branch_metric(block, segment, 0, 1, f.params, 2));
}
BENCHMARK(BM_BlockLattice);

static void BM_ForwardPassN960(benchmark::State& state) {
  const Frame f(static_cast<double>(state.range(0)) / 100.0);
  const TrellisSpec spec = make_trellis(f.scheme, f.params);
  for (auto _ : state) {
    TrellisEngine engine(spec, f.reads);
    benchmark::DoNotOptimize(engine.joint_forward(f.w));
  }
  state.counters["drift_window"] = 2.0 * spec.drift_max + 1;
}
BENCHMARK(BM_ForwardPassN960)->Arg(3)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_DensitySampleN960(benchmark::State& state) {
  const Frame f(0.10);
  const TrellisSpec spec = make_trellis(f.scheme, f.params);
  for (auto _ : state)
    benchmark::DoNotOptimize(information_density(spec, f.w, f.reads));
}
BENCHMARK(BM_DensitySampleN960)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
