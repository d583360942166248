#pragma once

#include <cstdint>
#include <random>

namespace dnafb {

/// SplitMix64 step; used for seed conditioning and stream splitting.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives the seed of sub-stream `stream` from a base seed.
///
/// Every module that needs several independent random streams (multiple
/// reads, per-frame seeds, offset vs. message randomness) derives them
/// through this function, so experiments are reproducible regardless of
/// worker count or evaluation order.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream);

/// Seedable uniform generator on top of std::mt19937_64.
///
/// Raw 64-bit draws of mt19937_64 are pinned by the standard, and the
/// conversions below avoid std::uniform_*_distribution, so identical seeds
/// give identical sequences on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform();

  /// Unbiased uniform integer in [0, bound); bound >= 1.
  std::uint32_t uniform_int(std::uint32_t bound);

 private:
  std::mt19937_64 gen_;
};

}  // namespace dnafb
