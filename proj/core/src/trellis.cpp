#include "dnafb/trellis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dnafb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LatticeProbs {
  double ins, del, match, sub;
};

LatticeProbs lattice_probs(const ChannelParams& p) {
  const double pt = p.p_trans();
  return {p.p_ins / p.alphabet_size, p.p_del, pt * (1.0 - p.p_sub),
          p.alphabet_size > 1 ? pt * p.p_sub / (p.alphabet_size - 1) : 0.0};
}

/// Edit-lattice DP over one block: res[c] = p(first c symbols of y_seg are
/// emitted while consuming the whole block), insertions capped per run.
/// y_seg points at the segment start; cmax bounds the columns explored.
void block_lattice(const Symbol* x, int n, const Symbol* y_seg, int cmax,
                   const LatticeProbs& lp, int ins_max, std::vector<double>& res) {
  const int runs = ins_max + 1;
  const int row = (cmax + 1) * runs;
  std::vector<double> F(static_cast<std::size_t>((n + 1) * row), 0.0);
  F[0] = 1.0;
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= cmax; ++c) {
      for (int k = 0; k < runs; ++k) {
        const double v = F[static_cast<std::size_t>(r * row + c * runs + k)];
        if (v == 0.0 || r == n) continue;
        if (c < cmax && k < ins_max)
          F[static_cast<std::size_t>(r * row + (c + 1) * runs + k + 1)] += v * lp.ins;
        F[static_cast<std::size_t>((r + 1) * row + c * runs)] += v * lp.del;
        if (c < cmax)
          F[static_cast<std::size_t>((r + 1) * row + (c + 1) * runs)] +=
              v * (y_seg[c] == x[r] ? lp.match : lp.sub);
      }
    }
  }
  res.assign(static_cast<std::size_t>(cmax + 1), 0.0);
  for (int c = 0; c <= cmax; ++c) {
    double s = 0.0;
    for (int k = 0; k < runs; ++k) s += F[static_cast<std::size_t>(n * row + c * runs + k)];
    res[static_cast<std::size_t>(c)] = s;
  }
}

}  // namespace

TrellisSpec make_trellis(const InnerScheme& scheme, const ChannelParams& params,
                         int drift_max, int ins_max) {
  params.validate();
  if (ins_max < 0) throw std::invalid_argument("make_trellis: ins_max must be >= 0");
  TrellisSpec spec{scheme, params, drift_max, ins_max};
  if (drift_max < 0) {
    // Symmetric window; use the larger of the two event rates so positive
    // drift is covered when insertions dominate.
    const double p = std::max(params.p_del, params.p_ins);
    spec.drift_max = static_cast<int>(std::ceil(5.0 * drift_std(scheme.dna_length(), p)));
  }
  return spec;
}

double branch_metric(const DnaSequence& x_block, const DnaSequence& y_segment,
                     int d, int d_prime, const ChannelParams& params, int ins_max) {
  params.validate();
  const int n = static_cast<int>(x_block.size());
  const int len = static_cast<int>(y_segment.size());
  if (len != n + d_prime - d)
    throw std::invalid_argument("branch_metric: |y_segment| must equal n + d' - d");
  if (len < 0 || len > n * (1 + ins_max)) return 0.0;
  std::vector<double> res;
  block_lattice(x_block.data(), n, y_segment.data(), len, lattice_probs(params),
                ins_max, res);
  return res[static_cast<std::size_t>(len)];
}

TrellisEngine::TrellisEngine(const TrellisSpec& spec, const std::vector<DnaSequence>& reads)
    : spec_(spec), reads_(reads) {
  if (reads_.empty()) throw std::invalid_argument("trellis: need at least one read");
  const int n = spec_.scheme.block_length;
  const int N = spec_.scheme.dna_length();
  const int D = spec_.drift_max;
  const int M = static_cast<int>(reads_.size());
  steps_ = spec_.scheme.steps();
  states_ = spec_.scheme.num_states();
  window_ = 2 * D + 1;
  tensor_size_ = 1;
  for (int j = 0; j < M; ++j) tensor_size_ *= static_cast<std::size_t>(window_);

  valid_ = true;
  final_drift_.resize(static_cast<std::size_t>(M));
  range_.assign(static_cast<std::size_t>(steps_ + 1), std::vector<Range>(static_cast<std::size_t>(M)));
  for (int j = 0; j < M; ++j) {
    const int fd = static_cast<int>(reads_[static_cast<std::size_t>(j)].size()) - N;
    final_drift_[static_cast<std::size_t>(j)] = fd;
    if (fd < -D || fd > D) valid_ = false;
    for (int i = 0; i <= steps_; ++i) {
      Range& r = range_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      r.lo = std::max({-D, -i * n, fd - (steps_ - i) * n * spec_.ins_max});
      r.hi = std::min({D, i * n * spec_.ins_max, fd + (steps_ - i) * n});
      if (r.lo > r.hi) valid_ = false;
    }
  }
}

void TrellisEngine::compute_metrics(int step, int state, int input,
                                    std::vector<std::vector<double>>& m) const {
  const int n = spec_.scheme.block_length;
  const int D = spec_.drift_max;
  const DnaSequence blk = spec_.scheme.block(step, state, input);
  const LatticeProbs lp = lattice_probs(spec_.params);
  std::vector<double> res;
  for (std::size_t j = 0; j < reads_.size(); ++j) {
    const Range& rf = range_[static_cast<std::size_t>(step)][j];
    const Range& rt = range_[static_cast<std::size_t>(step + 1)][j];
    std::vector<double>& mj = m[j];
    mj.assign(static_cast<std::size_t>(window_) * static_cast<std::size_t>(window_), 0.0);
    const DnaSequence& y = reads_[j];
    for (int d = rf.lo; d <= rf.hi; ++d) {
      const int lo = std::max(rt.lo, d - n);
      const int hi = std::min(rt.hi, d + n * spec_.ins_max);
      if (lo > hi) continue;
      const int off = step * n + d;
      block_lattice(blk.data(), n, y.data() + off, n + hi - d, lp, spec_.ins_max, res);
      double* row = mj.data() + static_cast<std::size_t>(d + D) * window_;
      for (int dp = lo; dp <= hi; ++dp)
        row[dp + D] = res[static_cast<std::size_t>(n + dp - d)];
    }
  }
}

/// out[.., d', ..] += m[d][d'] * in[.., d, ..] along the given read axis
/// (metrics are asymmetric; the same routine serves the backward pass with
/// boundary_from/boundary_to swapped via a transposed read of m).
void TrellisEngine::absorb(const double* in, double* out, const std::vector<double>& m,
                           int axis, int boundary_from, int boundary_to) const {
  const int M = static_cast<int>(reads_.size());
  const int n = spec_.scheme.block_length;
  const int D = spec_.drift_max;
  const bool fwd = boundary_to > boundary_from;
  std::size_t post = 1;
  for (int l = axis + 1; l < M; ++l) post *= static_cast<std::size_t>(window_);
  std::size_t pre = tensor_size_ / (post * static_cast<std::size_t>(window_));

  const Range& rin = range_[static_cast<std::size_t>(boundary_from)][static_cast<std::size_t>(axis)];
  const Range& rout = range_[static_cast<std::size_t>(boundary_to)][static_cast<std::size_t>(axis)];
  for (std::size_t ip = 0; ip < pre; ++ip) {
    for (int d = rin.lo; d <= rin.hi; ++d) {
      const int lo = std::max(rout.lo, fwd ? d - n : d - n * spec_.ins_max);
      const int hi = std::min(rout.hi, fwd ? d + n * spec_.ins_max : d + n);
      const double* src = in + (ip * window_ + static_cast<std::size_t>(d + D)) * post;
      for (int dp = lo; dp <= hi; ++dp) {
        const double w = fwd ? m[static_cast<std::size_t>(d + D) * window_ + (dp + D)]
                             : m[static_cast<std::size_t>(dp + D) * window_ + (d + D)];
        if (w == 0.0) continue;
        double* dst = out + (ip * window_ + static_cast<std::size_t>(dp + D)) * post;
        for (std::size_t k = 0; k < post; ++k) dst[k] += w * src[k];
      }
    }
  }
}

std::vector<double> TrellisEngine::uniform_priors_row() const {
  return std::vector<double>(static_cast<std::size_t>(spec_.scheme.num_inputs()),
                             1.0 / spec_.scheme.num_inputs());
}

bool TrellisEngine::run_forward(const std::vector<std::vector<double>>& priors,
                                const std::vector<int>* w, double* log2_py,
                                double* log2_pwy,
                                std::vector<std::vector<double>>* slices,
                                std::vector<double>* scales) {
  *log2_py = kNegInf;
  if (log2_pwy) *log2_pwy = kNegInf;
  if (!valid_) return false;
  const int N_o = spec_.scheme.outer_length;
  const int D = spec_.drift_max;
  const int M = static_cast<int>(reads_.size());
  if (static_cast<int>(priors.size()) < N_o)
    throw std::invalid_argument("trellis: need a prior row per outer step");
  if (w && static_cast<int>(w->size()) != N_o)
    throw std::invalid_argument("trellis: codeword length mismatch");

  const std::size_t full = static_cast<std::size_t>(states_) * tensor_size_;
  std::size_t start = 0;  // state 0, all drifts 0
  for (int j = 0; j < M; ++j) start = start * window_ + static_cast<std::size_t>(D);
  std::vector<double> alpha(full, 0.0), next(full), calpha, cnext, tmp(tensor_size_),
      tmp2(tensor_size_);
  alpha[start] = 1.0;
  double scale = 0.0, cscale = 0.0;
  bool cdead = (w == nullptr);
  if (w) {
    calpha.assign(full, 0.0);
    cnext.assign(full, 0.0);
    calpha[start] = 1.0;
  }
  if (slices) {
    slices->clear();
    scales->clear();
    slices->push_back(alpha);
    scales->push_back(0.0);
  }
  std::vector<std::vector<double>> m(static_cast<std::size_t>(M));

  for (int step = 0; step < steps_; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    if (w) std::fill(cnext.begin(), cnext.end(), 0.0);
    const int n_in = step < N_o ? spec_.scheme.num_inputs() : 1;
    for (int s = 0; s < states_; ++s) {
      const double* asub = alpha.data() + static_cast<std::size_t>(s) * tensor_size_;
      for (int input = 0; input < n_in; ++input) {
        const double p = step < N_o ? priors[static_cast<std::size_t>(step)][static_cast<std::size_t>(input)] : 1.0;
        if (p <= 0.0) continue;
        compute_metrics(step, s, input, m);
        const int s2 = spec_.scheme.next_state(s, input);
        double* nsub = next.data() + static_cast<std::size_t>(s2) * tensor_size_;

        const double* cur = asub;
        for (int j = 0; j < M; ++j) {
          double* out = (j % 2 == 0) ? tmp.data() : tmp2.data();
          std::fill(out, out + tensor_size_, 0.0);
          absorb(cur, out, m[static_cast<std::size_t>(j)], j, step, step + 1);
          cur = out;
        }
        for (std::size_t t = 0; t < tensor_size_; ++t) nsub[t] += p * cur[t];

        if (w && !cdead && (step >= N_o || input == (*w)[static_cast<std::size_t>(step)])) {
          const double* ccur = calpha.data() + static_cast<std::size_t>(s) * tensor_size_;
          for (int j = 0; j < M; ++j) {
            double* out = (j % 2 == 0) ? tmp.data() : tmp2.data();
            std::fill(out, out + tensor_size_, 0.0);
            absorb(ccur, out, m[static_cast<std::size_t>(j)], j, step, step + 1);
            ccur = out;
          }
          double* csub = cnext.data() + static_cast<std::size_t>(s2) * tensor_size_;
          for (std::size_t t = 0; t < tensor_size_; ++t) csub[t] += p * ccur[t];
        }
      }
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    if (sum <= 0.0) return false;
    const double inv = 1.0 / sum;
    for (std::size_t t = 0; t < full; ++t) alpha[t] = next[t] * inv;
    scale += std::log2(sum);
    if (w && !cdead) {
      double csum = 0.0;
      for (double v : cnext) csum += v;
      if (csum <= 0.0) {
        cdead = true;
      } else {
        const double cinv = 1.0 / csum;
        for (std::size_t t = 0; t < full; ++t) calpha[t] = cnext[t] * cinv;
        cscale += std::log2(csum);
      }
    }
    if (slices) {
      slices->push_back(alpha);
      scales->push_back(scale);
    }
  }

  std::size_t pin = 0;
  for (int j = 0; j < M; ++j)
    pin = pin * window_ + static_cast<std::size_t>(final_drift_[static_cast<std::size_t>(j)] + D);
  double mass = 0.0, cmass = 0.0;
  for (int s = 0; s < states_; ++s) {
    mass += alpha[static_cast<std::size_t>(s) * tensor_size_ + pin];
    if (w && !cdead) cmass += calpha[static_cast<std::size_t>(s) * tensor_size_ + pin];
  }
  if (mass <= 0.0) return false;
  *log2_py = std::log2(mass) + scale;
  if (log2_pwy && cmass > 0.0) *log2_pwy = std::log2(cmass) + cscale;
  return true;
}

ForwardResult TrellisEngine::forward(const std::vector<std::vector<double>>& priors) {
  ForwardResult r;
  r.ok = run_forward(priors, nullptr, &r.log2_py, nullptr, nullptr, nullptr);
  return r;
}

ForwardResult TrellisEngine::constrained_forward(
    const std::vector<std::vector<double>>& priors, const std::vector<int>& w) {
  ForwardResult r;
  double py = kNegInf;
  r.ok = run_forward(priors, &w, &py, &r.log2_py, nullptr, nullptr);
  return r;
}

JointForwardResult TrellisEngine::joint_forward(const std::vector<int>& w) {
  std::vector<std::vector<double>> priors(static_cast<std::size_t>(spec_.scheme.outer_length),
                                          uniform_priors_row());
  JointForwardResult r;
  r.ok = run_forward(priors, &w, &r.log2_py, &r.log2_pwy, nullptr, nullptr);
  if (r.ok && !std::isfinite(r.log2_pwy)) r.ok = false;
  return r;
}

AppResult TrellisEngine::posteriors(const std::vector<std::vector<double>>& priors) {
  AppResult out;
  std::vector<std::vector<double>> slices;
  std::vector<double> ascales;
  if (!run_forward(priors, nullptr, &out.log2_py, nullptr, &slices, &ascales)) return out;

  const int N_o = spec_.scheme.outer_length;
  const int D = spec_.drift_max;
  const int M = static_cast<int>(reads_.size());
  const std::size_t full = static_cast<std::size_t>(states_) * tensor_size_;

  std::size_t pin = 0;
  for (int j = 0; j < M; ++j)
    pin = pin * window_ + static_cast<std::size_t>(final_drift_[static_cast<std::size_t>(j)] + D);
  std::vector<double> beta(full, 0.0), next(full), tmp(tensor_size_), tmp2(tensor_size_);
  for (int s = 0; s < states_; ++s) beta[static_cast<std::size_t>(s) * tensor_size_ + pin] = 1.0;
  double bscale = 0.0;

  out.app.assign(static_cast<std::size_t>(N_o),
                 std::vector<double>(static_cast<std::size_t>(spec_.scheme.num_inputs()), 0.0));
  out.boundary_log2_mass.assign(static_cast<std::size_t>(steps_ + 1), 0.0);
  {
    double mass = 0.0;
    const std::vector<double>& a = slices[static_cast<std::size_t>(steps_)];
    for (std::size_t t = 0; t < full; ++t) mass += a[t] * beta[t];
    out.boundary_log2_mass[static_cast<std::size_t>(steps_)] =
        std::log2(mass) + ascales[static_cast<std::size_t>(steps_)] + bscale;
  }

  std::vector<std::vector<double>> m(static_cast<std::size_t>(M));
  for (int step = steps_ - 1; step >= 0; --step) {
    std::fill(next.begin(), next.end(), 0.0);
    const int n_in = step < N_o ? spec_.scheme.num_inputs() : 1;
    const std::vector<double>& aslice = slices[static_cast<std::size_t>(step)];
    for (int s = 0; s < states_; ++s) {
      for (int input = 0; input < n_in; ++input) {
        const double p = step < N_o ? priors[static_cast<std::size_t>(step)][static_cast<std::size_t>(input)] : 1.0;
        if (p <= 0.0) continue;
        compute_metrics(step, s, input, m);
        const int s2 = spec_.scheme.next_state(s, input);
        const double* cur = beta.data() + static_cast<std::size_t>(s2) * tensor_size_;
        for (int j = 0; j < M; ++j) {
          double* o = (j % 2 == 0) ? tmp.data() : tmp2.data();
          std::fill(o, o + tensor_size_, 0.0);
          absorb(cur, o, m[static_cast<std::size_t>(j)], j, step + 1, step);
          cur = o;
        }
        double* nsub = next.data() + static_cast<std::size_t>(s) * tensor_size_;
        for (std::size_t t = 0; t < tensor_size_; ++t) nsub[t] += p * cur[t];
        if (step < N_o) {
          const double* asub = aslice.data() + static_cast<std::size_t>(s) * tensor_size_;
          double dot = 0.0;
          for (std::size_t t = 0; t < tensor_size_; ++t) dot += asub[t] * cur[t];
          out.app[static_cast<std::size_t>(step)][static_cast<std::size_t>(input)] += p * dot;
        }
      }
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    if (sum <= 0.0) return out;
    const double inv = 1.0 / sum;
    for (std::size_t t = 0; t < full; ++t) beta[t] = next[t] * inv;
    bscale += std::log2(sum);
    // The step-i APP row was built from the unnormalized new beta; fold the
    // normalization back in implicitly by renormalizing the row itself.
    if (step < N_o) {
      std::vector<double>& row = out.app[static_cast<std::size_t>(step)];
      double rs = 0.0;
      for (double v : row) rs += v;
      if (rs <= 0.0) return out;
      for (double& v : row) v /= rs;
    }
    double mass = 0.0;
    const std::vector<double>& a = slices[static_cast<std::size_t>(step)];
    for (std::size_t t = 0; t < full; ++t) mass += a[t] * beta[t];
    out.boundary_log2_mass[static_cast<std::size_t>(step)] =
        std::log2(mass) + ascales[static_cast<std::size_t>(step)] + bscale;
  }
  out.ok = true;
  return out;
}

}  // namespace dnafb
