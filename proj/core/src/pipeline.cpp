#include "dnafb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dnafb/rng.hpp"

namespace dnafb {

namespace {

constexpr double kFloor = 1e-12;

void normalize_floor(std::vector<double>& v) {
  double s = 0.0;
  for (double& x : v) {
    if (!(x > kFloor)) x = kFloor;
    s += x;
  }
  for (double& x : v) x /= s;
}

BaseMatrix pick_protograph(const SystemConfig& cfg) {
  std::string name = cfg.protograph;
  if (name == "auto")
    name = (cfg.inner_kind == InnerKind::CC || cfg.inner_kind == InnerKind::WM) ? "b1" : "b2";
  if (name == "b1") return BaseMatrix::b1();
  if (name == "b2") return BaseMatrix::b2();
  return BaseMatrix::from_file(name);
}

}  // namespace

System build_system(const SystemConfig& cfg) {
  if (cfg.lifting < 1) throw std::invalid_argument("build_system: lifting factor must be >= 1");
  System sys;
  sys.cfg = cfg;

  int field_bits = cfg.field_bits;
  if (field_bits == 0) field_bits = cfg.inner_kind == InnerKind::CC ? 1 : 4;

  const BaseMatrix base = pick_protograph(cfg);
  sys.outer = lift_protograph(base, cfg.lifting, sub_seed(cfg.seed, 2));
  assign_field_labels(sys.outer, field_bits, sub_seed(cfg.seed, 3));
  prepare_encoder(sys.outer);

  InnerConfig inner = cfg.inner;
  inner.outer_length = sys.outer.length;
  if (inner.seed == 0) inner.seed = sub_seed(cfg.seed, 4);
  sys.scheme = make_scheme(cfg.inner_kind, inner);
  if (sys.scheme.label_bits != field_bits)
    throw std::invalid_argument(
        "build_system: outer field bits must match the inner label bits");
  return sys;
}

DnaSequence encode_frame(const System& sys, const std::vector<int>& u) {
  return encode(sys.scheme, encode_ldpc(sys.outer, u));
}

DecodeResult decode_frame(const System& sys, const ChannelParams& params,
                          const std::vector<DnaSequence>& reads) {
  DecodeResult out;
  out.u_hat.assign(static_cast<std::size_t>(sys.outer.dimension), 0);

  const TrellisSpec spec =
      make_trellis(sys.scheme, params, sys.cfg.drift_max, sys.cfg.ins_max);
  TrellisEngine engine(spec, reads);
  if (!engine.valid()) return out;  // status stays ChannelOverflow

  const int N_o = sys.scheme.outer_length;
  const int q = sys.scheme.num_inputs();
  std::vector<std::vector<double>> priors(
      static_cast<std::size_t>(N_o), std::vector<double>(static_cast<std::size_t>(q), 1.0 / q));
  out.status = DecodeStatus::MaxIterations;

  std::vector<int> hard;
  for (int it = 1; it <= sys.cfg.turbo_max_iter; ++it) {
    out.turbo_iterations = it;
    const AppResult app = engine.posteriors(priors);
    if (!app.ok) return DecodeResult{out.u_hat, DecodeStatus::ChannelOverflow, it};

    // Inner extrinsic: posterior with the current prior divided back out.
    std::vector<std::vector<double>> ext(static_cast<std::size_t>(N_o),
                                         std::vector<double>(static_cast<std::size_t>(q)));
    for (int i = 0; i < N_o; ++i) {
      for (int x = 0; x < q; ++x)
        ext[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] =
            app.app[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] /
            std::max(priors[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)], kFloor);
      normalize_floor(ext[static_cast<std::size_t>(i)]);
    }

    const BpResult bp = decode_bp(sys.outer, ext, sys.cfg.bp_max_iter);
    hard = bp.hard;
    if (bp.converged) {
      out.status = DecodeStatus::Converged;
      break;
    }
    priors = bp.extrinsics;
    for (auto& row : priors) normalize_floor(row);
  }
  if (!hard.empty())
    for (std::size_t i = 0; i < sys.outer.message_cols.size(); ++i)
      out.u_hat[i] = hard[static_cast<std::size_t>(sys.outer.message_cols[i])];
  return out;
}

namespace {

void wilson_interval(long errors, long frames, double* lo, double* hi) {
  if (frames == 0) {
    *lo = 0.0;
    *hi = 1.0;
    return;
  }
  const double z = 1.959963984540054;
  const double n = static_cast<double>(frames);
  const double p = static_cast<double>(errors) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  *lo = std::max(0.0, center - half);
  *hi = std::min(1.0, center + half);
}

}  // namespace

FerPoint run_fer(const System& sys, const ChannelParams& params, const StopRule& stop,
                 std::uint64_t seed, int workers) {
  params.validate();
  FerPoint pt;
  pt.p_id = params.p_del;

  struct FrameOutcome {
    bool error = false, overflow = false, nonconverged = false;
  };
  auto run_frame = [&](long v) {
    const std::uint64_t base = sub_seed(seed, static_cast<std::uint64_t>(v));
    Rng urng(sub_seed(base, 0));
    std::vector<int> u(static_cast<std::size_t>(sys.outer.dimension));
    for (int& sym : u)
      sym = static_cast<int>(urng.uniform_int(static_cast<std::uint32_t>(sys.outer.order())));
    const DnaSequence x = encode_frame(sys, u);
    const ReadSet reads = transmit_multi(x, params, sys.cfg.reads, sub_seed(base, 1));
    const DecodeResult r = decode_frame(sys, params, reads.reads);
    FrameOutcome o;
    o.error = r.u_hat != u;
    o.overflow = r.status == DecodeStatus::ChannelOverflow;
    o.nonconverged = r.status == DecodeStatus::MaxIterations;
    return o;
  };

  const long batch = 64;
  const int nw = std::max(1, workers);
  std::vector<FrameOutcome> outcomes(static_cast<std::size_t>(batch));
  while (pt.frames < stop.max_frames && pt.errors < stop.max_errors) {
    const long count = std::min(batch, stop.max_frames - pt.frames);
    if (nw == 1) {
      for (long i = 0; i < count; ++i) outcomes[static_cast<std::size_t>(i)] = run_frame(pt.frames + i);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nw; ++t)
        pool.emplace_back([&, t] {
          for (long i = t; i < count; i += nw)
            outcomes[static_cast<std::size_t>(i)] = run_frame(pt.frames + i);
        });
      for (std::thread& th : pool) th.join();
    }
    for (long i = 0; i < count; ++i) {
      const FrameOutcome& o = outcomes[static_cast<std::size_t>(i)];
      pt.errors += o.error;
      pt.overflows += o.overflow;
      pt.nonconverged += o.nonconverged;
    }
    pt.frames += count;
  }
  pt.fer = pt.frames > 0 ? static_cast<double>(pt.errors) / pt.frames : 0.0;
  wilson_interval(pt.errors, pt.frames, &pt.ci_lo, &pt.ci_hi);
  return pt;
}

std::vector<FerPoint> run_curve(const System& sys, const std::vector<double>& p_list,
                                const StopRule& stop, std::uint64_t seed, int workers) {
  std::vector<FerPoint> out;
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    ChannelParams params = sys.cfg.channel;
    params.p_ins = params.p_del = p_list[i];
    FerPoint pt = run_fer(sys, params, stop, sub_seed(seed, i), workers);
    pt.p_id = p_list[i];
    out.push_back(pt);
  }
  return out;
}

}  // namespace dnafb
