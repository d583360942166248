#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dnafb/channel.hpp"
#include "dnafb/inner.hpp"

namespace dnafb {

/// Drift-augmented trellis for one inner scheme / channel combination.
/// The joint hidden state per boundary is (code state, drift per read);
/// drifts live in [-drift_max, drift_max] and the boundary drifts d_0 = 0
/// and d_last = N' - N are pinned.
struct TrellisSpec {
  InnerScheme scheme;
  ChannelParams params;
  int drift_max = 0;
  int ins_max = 2;  // decoder-side cap on consecutive insertions
};

/// drift_max < 0 picks the default window ceil(5 * drift_std).
TrellisSpec make_trellis(const InnerScheme& scheme, const ChannelParams& params,
                         int drift_max = -1, int ins_max = 2);

/// p(y_segment, d' | d, x_block) by edit-lattice DP with the consecutive
/// insertion cap. Requires |y_segment| == n + d' - d.
double branch_metric(const DnaSequence& x_block, const DnaSequence& y_segment,
                     int d, int d_prime, const ChannelParams& params, int ins_max);

struct ForwardResult {
  double log2_py = 0.0;       // log2 p(y) (or log2 p(w, y) for the constrained pass)
  bool ok = false;            // false: drift overflow or zero terminal mass
};

struct JointForwardResult {
  double log2_py = 0.0;
  double log2_pwy = 0.0;
  bool ok = false;
};

struct AppResult {
  std::vector<std::vector<double>> app;  // steps() x num_inputs, rows sum to 1
  double log2_py = 0.0;
  std::vector<double> boundary_log2_mass;  // log2 sum_sigma alpha*beta per boundary
  bool ok = false;
};

/// Forward/backward engine bound to one set of reads. Reentrant per instance
/// is not required; build one engine per decode.
class TrellisEngine {
 public:
  TrellisEngine(const TrellisSpec& spec, const std::vector<DnaSequence>& reads);

  /// False when some read's net drift falls outside the window (frame lost).
  bool valid() const { return valid_; }

  /// priors: outer_length rows over num_inputs labels, each summing to 1.
  /// Termination steps are handled internally (forced zero input).
  ForwardResult forward(const std::vector<std::vector<double>>& priors);

  /// log2 p(w, y): step-i transitions restricted to label w_i, prior retained.
  ForwardResult constrained_forward(const std::vector<std::vector<double>>& priors,
                                    const std::vector<int>& w);

  /// One shared pass computing both terms with uniform priors.
  JointForwardResult joint_forward(const std::vector<int>& w);

  /// Full forward/backward, per-step posteriors p(w_i | y).
  AppResult posteriors(const std::vector<std::vector<double>>& priors);

 private:
  struct Range { int lo = 0, hi = -1; };  // inclusive; empty when lo > hi

  void compute_metrics(int step, int state, int input,
                       std::vector<std::vector<double>>& m) const;
  void absorb(const double* in, double* out, const std::vector<double>& m,
              int axis, int boundary_from, int boundary_to) const;
  bool run_forward(const std::vector<std::vector<double>>& priors,
                   const std::vector<int>* w, double* log2_py, double* log2_pwy,
                   std::vector<std::vector<double>>* slices,
                   std::vector<double>* scales);
  std::vector<double> uniform_priors_row() const;

  TrellisSpec spec_;
  std::vector<DnaSequence> reads_;
  std::vector<int> final_drift_;
  std::vector<std::vector<Range>> range_;  // [boundary][read]
  int window_ = 0;   // 2*drift_max + 1
  int states_ = 1;
  int steps_ = 0;
  std::size_t tensor_size_ = 0;  // window_^M per code state
  bool valid_ = false;
};

}  // namespace dnafb
