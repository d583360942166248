#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnafb/channel.hpp"
#include "dnafb/inner.hpp"
#include "dnafb/ldpc.hpp"
#include "dnafb/trellis.hpp"

namespace dnafb {

struct SystemConfig {
  InnerKind inner_kind = InnerKind::TVC2;
  InnerConfig inner;                // outer_length is derived, leave 0
  std::string protograph = "auto";  // "b1" | "b2" | base-matrix file | "auto"
  int lifting = 0;                  // Q_p
  int field_bits = 0;               // 0: 4 for block schemes, 1 for CC
  int bp_max_iter = 100;
  int turbo_max_iter = 100;
  ChannelParams channel;
  int reads = 1;  // M
  int drift_max = -1;
  int ins_max = 2;
  std::uint64_t seed = 0;
};

/// Fully instantiated concatenated code.
struct System {
  SystemConfig cfg;
  InnerScheme scheme;
  LdpcCode outer;

  int message_length() const { return outer.dimension; }
  /// Information bits per DNA symbol, K*k/N.
  double rate() const {
    return static_cast<double>(outer.dimension) * outer.field_bits / scheme.dna_length();
  }
};

System build_system(const SystemConfig& cfg);

DnaSequence encode_frame(const System& sys, const std::vector<int>& u);

enum class DecodeStatus { Converged, MaxIterations, ChannelOverflow };

struct DecodeResult {
  std::vector<int> u_hat;
  DecodeStatus status = DecodeStatus::ChannelOverflow;
  int turbo_iterations = 0;
};

DecodeResult decode_frame(const System& sys, const ChannelParams& params,
                          const std::vector<DnaSequence>& reads);

struct StopRule {
  long max_errors = 100;
  long max_frames = 100000;
};

struct FerPoint {
  double p_id = 0.0;  // p_ins = p_del at this sweep point
  long frames = 0;
  long errors = 0;
  double fer = 0.0;
  double ci_lo = 0.0;  // 95% Wilson interval
  double ci_hi = 0.0;
  long overflows = 0;      // channel-overflow frames (counted as errors)
  long nonconverged = 0;   // turbo cap hit (counted by correctness only)
};

/// Frame v is a pure function of sub_seed(seed, v); batches have fixed
/// boundaries so the outcome is independent of the worker count.
FerPoint run_fer(const System& sys, const ChannelParams& params, const StopRule& stop,
                 std::uint64_t seed, int workers = 1);

/// Sweep p_ins = p_del = p over p_list, keeping the other channel fields.
std::vector<FerPoint> run_curve(const System& sys, const std::vector<double>& p_list,
                                const StopRule& stop, std::uint64_t seed, int workers = 1);

}  // namespace dnafb
