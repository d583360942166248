#pragma once

#include <cstdint>
#include <vector>

#include "dnafb/channel.hpp"
#include "dnafb/inner.hpp"
#include "dnafb/trellis.hpp"

namespace dnafb {

struct DensitySample {
  double i_bits = 0.0;  // N_o*log2(q_o) + log2 p(w,y) - log2 p(y)
  std::uint64_t seed = 0;
  std::vector<int> final_drifts;
  bool valid = false;  // false: drift-window overflow or zero mass
};

struct DtEstimate {
  double bound = 1.0;
  double std_err = 0.0;
  int samples = 0;           // valid samples entering the average
  double invalid_fraction = 0.0;
  double threshold_bits = 0.0;
  int dna_length = 0;
  int reads = 1;
};

/// Density of one (w, reads) pair on the given trellis.
DensitySample information_density(const TrellisSpec& spec, const std::vector<int>& w,
                                  const std::vector<DnaSequence>& reads);

/// Monte-Carlo DT bound: mean of 2^{-(i - (threshold_bits - 1))+} over valid
/// samples. pessimistic_invalid counts invalid samples as summand 1.
DtEstimate dt_bound(const std::vector<DensitySample>& samples, double threshold_bits,
                    bool pessimistic_invalid = false);

struct SampleConfig {
  int trials = 0;            // V
  int reads = 1;             // M
  std::uint64_t seed = 0;
  int drift_max = -1;        // -1: default window
  int ins_max = 2;
  int workers = 1;
};

/// V independent densities; sample v is a pure function of sub_seed(seed, v),
/// so results are identical for any worker count.
std::vector<DensitySample> sample_density(const InnerScheme& scheme,
                                          const ChannelParams& params,
                                          const SampleConfig& cfg);

DtEstimate sample_dt(const InnerScheme& scheme, const ChannelParams& params,
                     const SampleConfig& cfg, double threshold_bits,
                     bool pessimistic_invalid = false);

struct NormalizedRate {
  double value = 0.0;     // actual_rate / r_max
  double r_max = 0.0;     // bits per DNA symbol
  double threshold_bits = 0.0;
  bool degenerate = false;  // bound above target even as the threshold -> 0
};

/// Largest threshold b* (0.1-bit bisection) with dt_bound(samples, b*) <=
/// target_fer; r_max = b*/N.
NormalizedRate normalized_rate(const std::vector<DensitySample>& samples,
                               double target_fer, int dna_length, double actual_rate,
                               bool pessimistic_invalid = false);

}  // namespace dnafb
