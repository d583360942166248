#include "dnafb/info_density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dnafb/rng.hpp"

namespace dnafb {

DensitySample information_density(const TrellisSpec& spec, const std::vector<int>& w,
                                  const std::vector<DnaSequence>& reads) {
  DensitySample out;
  TrellisEngine engine(spec, reads);
  const int N = spec.scheme.dna_length();
  for (const DnaSequence& y : reads)
    out.final_drifts.push_back(static_cast<int>(y.size()) - N);
  if (!engine.valid()) return out;
  const JointForwardResult r = engine.joint_forward(w);
  if (!r.ok) return out;
  out.i_bits = spec.scheme.outer_length * spec.scheme.label_bits + r.log2_pwy - r.log2_py;
  out.valid = true;
  return out;
}

DtEstimate dt_bound(const std::vector<DensitySample>& samples, double threshold_bits,
                    bool pessimistic_invalid) {
  if (samples.empty()) throw std::invalid_argument("dt_bound: no samples");
  if (threshold_bits <= 0.0) throw std::invalid_argument("dt_bound: threshold must be > 0");
  DtEstimate est;
  est.threshold_bits = threshold_bits;
  double sum = 0.0, sumsq = 0.0;
  int n = 0, invalid = 0;
  for (const DensitySample& s : samples) {
    double term;
    if (!s.valid) {
      ++invalid;
      if (!pessimistic_invalid) continue;
      term = 1.0;
    } else {
      const double e = std::max(0.0, s.i_bits - (threshold_bits - 1.0));
      term = std::exp2(-e);
    }
    sum += term;
    sumsq += term * term;
    ++n;
  }
  est.invalid_fraction = static_cast<double>(invalid) / samples.size();
  if (n == 0) throw std::invalid_argument("dt_bound: no valid samples");
  est.samples = n;
  est.bound = sum / n;
  if (n > 1) {
    const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
    est.std_err = std::sqrt(var / n);
  }
  return est;
}

std::vector<DensitySample> sample_density(const InnerScheme& scheme,
                                          const ChannelParams& params,
                                          const SampleConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("sample_density: trials must be >= 1");
  if (cfg.reads < 1) throw std::invalid_argument("sample_density: reads must be >= 1");
  const TrellisSpec spec = make_trellis(scheme, params, cfg.drift_max, cfg.ins_max);
  std::vector<DensitySample> out(static_cast<std::size_t>(cfg.trials));

  auto run_one = [&](int v) {
    const std::uint64_t base = sub_seed(cfg.seed, static_cast<std::uint64_t>(v));
    Rng wrng(sub_seed(base, 0));
    std::vector<int> w(static_cast<std::size_t>(scheme.outer_length));
    for (int& sym : w)
      sym = static_cast<int>(wrng.uniform_int(static_cast<std::uint32_t>(scheme.num_inputs())));
    const DnaSequence x = encode(scheme, w);
    const ReadSet reads = transmit_multi(x, params, cfg.reads, sub_seed(base, 1));
    out[static_cast<std::size_t>(v)] = information_density(spec, w, reads.reads);
    out[static_cast<std::size_t>(v)].seed = base;
  };

  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (int v = 0; v < cfg.trials; ++v) run_one(v);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (int v = t; v < cfg.trials; v += workers) run_one(v);
      });
    for (std::thread& th : pool) th.join();
  }
  return out;
}

DtEstimate sample_dt(const InnerScheme& scheme, const ChannelParams& params,
                     const SampleConfig& cfg, double threshold_bits,
                     bool pessimistic_invalid) {
  DtEstimate est = dt_bound(sample_density(scheme, params, cfg), threshold_bits,
                            pessimistic_invalid);
  est.dna_length = scheme.dna_length();
  est.reads = cfg.reads;
  return est;
}

NormalizedRate normalized_rate(const std::vector<DensitySample>& samples,
                               double target_fer, int dna_length, double actual_rate,
                               bool pessimistic_invalid) {
  if (target_fer <= 0.0 || target_fer >= 1.0)
    throw std::invalid_argument("normalized_rate: target_fer must be in (0, 1)");
  NormalizedRate out;
  auto bound_at = [&](double b) {
    return dt_bound(samples, b, pessimistic_invalid).bound;
  };
  double lo = 1e-6;
  if (bound_at(lo) > target_fer) {
    out.degenerate = true;
    return out;
  }
  // Threshold can never usefully exceed the top of the density range + slack.
  double hi = 2.0;
  for (const DensitySample& s : samples)
    if (s.valid) hi = std::max(hi, s.i_bits + 2.0);
  if (bound_at(hi) <= target_fer) {
    lo = hi;
  } else {
    while (hi - lo > 0.1) {
      const double mid = 0.5 * (lo + hi);
      (bound_at(mid) <= target_fer ? lo : hi) = mid;
    }
  }
  out.threshold_bits = lo;
  out.r_max = lo / dna_length;
  out.value = actual_rate / out.r_max;
  return out;
}

}  // namespace dnafb
