// Command-line front end: channel sampling, DT bounds, FER curves,
// normalized rate, codebook validation. CSV output with a '#' metadata
// header carrying the resolved configuration and seed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnafb/channel.hpp"
#include "dnafb/config.hpp"
#include "dnafb/info_density.hpp"
#include "dnafb/inner.hpp"
#include "dnafb/pipeline.hpp"
#include "dnafb/rng.hpp"

using namespace dnafb;

namespace {

struct Common {
  std::string config_file;
  std::string out_path;
  std::string scheme = "tvc2";
  std::string codebook_file;
  bool strict = false;
  int offset = -1;
  double p = -1.0;
  std::vector<double> p_list;
  double p_sub = 0.0;
  int q = 4;
  int reads = 1;
  int dna_length = 960;
  int drift_max = -1;
  int ins_max = 2;
  std::uint64_t seed = 1;
  int workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_file, "config file (CLI flags override)");
  cmd->add_option("--out,-o", c.out_path, "output CSV path (default stdout)");
  cmd->add_option("--seed", c.seed, "global experiment seed");
  cmd->add_option("--workers", c.workers, "worker threads");
}

void add_channel(CLI::App* cmd, Common& c) {
  cmd->add_option("--p", c.p, "p_ins = p_del sweep point");
  cmd->add_option("--p-list", c.p_list, "explicit sweep points");
  cmd->add_option("--p-sub", c.p_sub, "substitution probability");
  cmd->add_option("--q", c.q, "channel alphabet size");
}

void add_scheme(CLI::App* cmd, Common& c) {
  cmd->add_option("--scheme", c.scheme, "inner scheme: cc|wm|tvc1|tvc2");
  cmd->add_option("--codebook", c.codebook_file, "codebook file (default builtin)");
  cmd->add_flag("--strict", c.strict, "require min edit distance 4 codebooks");
  cmd->add_option("--offset", c.offset, "offset: -1 scheme default, 0 off, 1 on");
  cmd->add_option("--M", c.reads, "reads per frame");
  cmd->add_option("--drift-max", c.drift_max, "drift window override");
  cmd->add_option("--ins-max", c.ins_max, "decoder consecutive-insertion cap");
}

// Fold config-file values under the CLI values; CLI wins when given.
void apply_config(const CLI::App* cmd, Common& c) {
  if (c.config_file.empty()) return;
  Config cfg;
  cfg.load_file(c.config_file);
  auto miss = [&](const char* flag) {
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    return o == nullptr || o->count() == 0;
  };
  // Read every recognized key (marking it consumed) and keep the file value
  // only where the CLI did not set the flag; leftovers are then hard errors.
  auto fold_d = [&](const char* flag, const char* key, double& slot) {
    const double v = cfg.get_double(key, slot);
    if (miss(flag)) slot = v;
  };
  auto fold_i = [&](const char* flag, const char* key, int& slot) {
    const int v = cfg.get_int(key, slot);
    if (miss(flag)) slot = v;
  };
  auto fold_s = [&](const char* flag, const char* key, std::string& slot) {
    const std::string v = cfg.get_string(key, slot);
    if (miss(flag)) slot = v;
  };
  fold_d("--p", "channel.p", c.p);
  fold_d("--p-sub", "channel.p_sub", c.p_sub);
  fold_i("--q", "channel.q", c.q);
  fold_i("--M", "channel.reads", c.reads);
  fold_s("--scheme", "inner.scheme", c.scheme);
  fold_s("--codebook", "inner.codebook_file", c.codebook_file);
  {
    const bool v = cfg.get_bool("inner.strict", c.strict);
    if (miss("--strict")) c.strict = v;
  }
  fold_i("--offset", "inner.offset", c.offset);
  fold_i("--drift-max", "trellis.drift_max", c.drift_max);
  fold_i("--ins-max", "trellis.ins_max", c.ins_max);
  {
    const std::uint64_t v = cfg.get_u64("run.seed", c.seed);
    if (miss("--seed")) c.seed = v;
  }
  fold_i("--workers", "run.workers", c.workers);
  fold_i("--N", "inner.N", c.dna_length);
  cfg.check_consumed();  // unknown/typo keys are hard errors
}

ChannelParams channel_at(const Common& c, double p) {
  ChannelParams params;
  params.p_ins = params.p_del = p;
  params.p_sub = c.p_sub;
  params.alphabet_size = c.q;
  params.validate();
  return params;
}

std::vector<double> sweep_points(const Common& c) {
  if (!c.p_list.empty()) return c.p_list;
  if (c.p >= 0.0) return {c.p};
  throw std::runtime_error("no channel point given (use --p or --p-list)");
}

InnerScheme scheme_for_length(const Common& c, InnerKind kind) {
  InnerConfig ic;
  ic.codebook_file = c.codebook_file;
  ic.strict = c.strict;
  ic.offset = c.offset;
  ic.seed = sub_seed(c.seed, 4);
  // Translate the requested DNA length into the outer length.
  if (kind == InnerKind::CC) {
    ic.outer_length = c.dna_length - 2;
  } else {
    InnerConfig probe = ic;
    probe.outer_length = 1;
    const int n = make_scheme(kind, probe).block_length;
    if (c.dna_length % n != 0)
      throw std::runtime_error("--N must be a multiple of the inner block length");
    ic.outer_length = c.dna_length / n;
  }
  return make_scheme(kind, ic);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
  void header(const Common& c, const std::string& cmd,
              const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    os() << "# dnafb " << cmd << "\n";
    os() << "# seed=" << c.seed << " scheme=" << c.scheme << " q=" << c.q
         << " M=" << c.reads << " p_sub=" << c.p_sub << " workers=" << c.workers
         << "\n";
    os() << "# drift_max=" << c.drift_max << " ins_max=" << c.ins_max
         << " codebook=" << (c.codebook_file.empty() ? "builtin" : c.codebook_file)
         << " offset=" << c.offset << " strict=" << (c.strict ? 1 : 0) << "\n";
    if (!extra.empty()) {
      os() << "#";
      for (const auto& [k, v] : extra) os() << " " << k << "=" << v;
      os() << "\n";
    }
  }

 private:
  std::ofstream file_;
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

int cmd_channel_sample(const Common& c, int count, int length) {
  const ChannelParams params = channel_at(c, c.p >= 0.0 ? c.p : 0.0);
  Output out(c.out_path);
  out.header(c, "channel-sample", {{"count", std::to_string(count)}, {"length", std::to_string(length)}, {"p", fmt(params.p_del)}});
  out.os() << "sample,length_in,length_out,drift,insertions,deletions,read\n";
  Rng rng(sub_seed(c.seed, 0));
  for (int v = 0; v < count; ++v) {
    DnaSequence x(static_cast<std::size_t>(length));
    for (Symbol& s : x) s = static_cast<Symbol>(rng.uniform_int(static_cast<std::uint32_t>(c.q)));
    auto [y, trace] = transmit(x, params, sub_seed(c.seed, 1000 + static_cast<std::uint64_t>(v)));
    out.os() << v << "," << length << "," << y.size() << "," << trace.final_drift() << ","
             << trace.insertions() << "," << trace.deletions() << ","
             << (c.q == 4 ? to_acgt(y) : std::string("-")) << "\n";
  }
  return 0;
}

int cmd_dt_bound(const Common& c, int trials, double rate, double threshold,
                 bool literal_threshold, bool pessimistic) {
  const InnerKind kind = inner_kind_from_name(c.scheme);
  const InnerScheme scheme = scheme_for_length(c, kind);
  double thr = threshold;
  if (thr <= 0.0)
    thr = literal_threshold
              ? static_cast<double>(scheme.outer_length) * scheme.label_bits
              : rate * scheme.dna_length();
  Output out(c.out_path);
  out.header(c, "dt-bound",
             {{"V", std::to_string(trials)}, {"threshold_bits", fmt(thr)},
              {"N", std::to_string(scheme.dna_length())}});
  out.os() << "p_id,bound,stderr,V,invalid_frac,threshold_bits,N,M,scheme\n";
  for (double p : sweep_points(c)) {
    SampleConfig sc;
    sc.trials = trials;
    sc.reads = c.reads;
    sc.seed = sub_seed(c.seed, static_cast<std::uint64_t>(p * 1e9));
    sc.drift_max = c.drift_max;
    sc.ins_max = c.ins_max;
    sc.workers = c.workers;
    const DtEstimate est = sample_dt(scheme, channel_at(c, p), sc, thr, pessimistic);
    out.os() << fmt(p) << "," << fmt(est.bound) << "," << fmt(est.std_err) << ","
             << est.samples << "," << fmt(est.invalid_fraction) << ","
             << fmt(est.threshold_bits) << "," << scheme.dna_length() << "," << c.reads
             << "," << c.scheme << "\n";
  }
  return 0;
}

System make_system(const Common& c, int lifting, const std::string& protograph,
                   int bp_iters, int turbo_iters) {
  SystemConfig sc;
  sc.inner_kind = inner_kind_from_name(c.scheme);
  sc.inner.codebook_file = c.codebook_file;
  sc.inner.strict = c.strict;
  sc.inner.offset = c.offset;
  sc.protograph = protograph;
  sc.lifting = lifting;
  sc.bp_max_iter = bp_iters;
  sc.turbo_max_iter = turbo_iters;
  sc.channel = channel_at(c, c.p >= 0.0 ? c.p : 0.0);
  sc.reads = c.reads;
  sc.drift_max = c.drift_max;
  sc.ins_max = c.ins_max;
  sc.seed = c.seed;
  return build_system(sc);
}

int cmd_simulate_fer(const Common& c, int lifting, const std::string& protograph,
                     int bp_iters, int turbo_iters, long max_frames, long max_errors) {
  const System sys = make_system(c, lifting, protograph, bp_iters, turbo_iters);
  Output out(c.out_path);
  out.header(c, "simulate-fer",
             {{"Qp", std::to_string(lifting)}, {"protograph", protograph},
              {"bp_iters", std::to_string(bp_iters)},
              {"turbo_iters", std::to_string(turbo_iters)},
              {"rate", fmt(sys.rate())},
              {"N", std::to_string(sys.scheme.dna_length())}});
  out.os() << "p_id,frames,errors,fer,ci_lo,ci_hi,overflow_frac,scheme,N,M,turbo_iters\n";
  StopRule stop{max_errors, max_frames};
  for (const FerPoint& pt : run_curve(sys, sweep_points(c), stop, c.seed, c.workers)) {
    out.os() << fmt(pt.p_id) << "," << pt.frames << "," << pt.errors << "," << fmt(pt.fer)
             << "," << fmt(pt.ci_lo) << "," << fmt(pt.ci_hi) << ","
             << fmt(pt.frames ? static_cast<double>(pt.overflows) / pt.frames : 0.0) << ","
             << c.scheme << "," << sys.scheme.dna_length() << "," << c.reads << ","
             << turbo_iters << "\n";
  }
  return 0;
}

int cmd_normalized_rate(const Common& c, int lifting, const std::string& protograph,
                        int trials, double target_fer) {
  const System sys = make_system(c, lifting, protograph, 100, 100);
  const double p = c.p;
  if (p < 0.0) throw std::runtime_error("normalized-rate needs --p");
  SampleConfig sc;
  sc.trials = trials;
  sc.reads = c.reads;
  sc.seed = sub_seed(c.seed, 7);
  sc.drift_max = c.drift_max;
  sc.ins_max = c.ins_max;
  sc.workers = c.workers;
  const std::vector<DensitySample> samples =
      sample_density(sys.scheme, channel_at(c, p), sc);
  const NormalizedRate nr =
      normalized_rate(samples, target_fer, sys.scheme.dna_length(), sys.rate());
  int invalid = 0;
  for (const DensitySample& s : samples) invalid += !s.valid;
  Output out(c.out_path);
  out.header(c, "normalized-rate",
             {{"Qp", std::to_string(lifting)}, {"V", std::to_string(trials)},
              {"target_fer", fmt(target_fer)}});
  out.os() << "p_id,normalized_rate,r_max,threshold_bits,actual_rate,target_fer,V,"
              "invalid_frac,scheme,N,M\n";
  out.os() << fmt(p) << "," << (nr.degenerate ? "inf" : fmt(nr.value)) << ","
           << fmt(nr.r_max) << "," << fmt(nr.threshold_bits) << "," << fmt(sys.rate())
           << "," << fmt(target_fer) << "," << trials << ","
           << fmt(static_cast<double>(invalid) / trials) << "," << c.scheme << ","
           << sys.scheme.dna_length() << "," << c.reads << "\n";
  return 0;
}

int cmd_validate_codebook(const std::string& path, bool strict) {
  const std::vector<Codebook> books = load_codebook_file(path);
  bool ok = true;
  for (const Codebook& cb : books) {
    cb.validate();
    const int d = codebook_min_levenshtein(cb);
    std::cout << "codebook " << cb.id << ": n=" << cb.word_length << " k=" << cb.label_bits
              << " entries=" << cb.size() << " min_levenshtein=" << d << "\n";
    if (strict && d < 4) ok = false;
  }
  if (!ok) {
    std::cerr << "strict validation failed: min edit distance below 4\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-blocklength toolkit for the insertion/deletion/substitution DNA channel"};
  app.require_subcommand(1);

  Common c;
  int count = 10, length = 100;
  int trials = 200;
  double rate = 0.5, threshold = -1.0, target_fer = 1e-3;
  bool literal_threshold = false, pessimistic = false, strict_validate = false;
  int lifting = 40, bp_iters = 100, turbo_iters = 100;
  long max_frames = 100000, max_errors = 100;
  std::string protograph = "auto", cb_path;

  CLI::App* cs = app.add_subcommand("channel-sample", "sample channel transmissions");
  add_common(cs, c);
  add_channel(cs, c);
  cs->add_option("--count", count, "number of samples");
  cs->add_option("--length", length, "input sequence length");

  CLI::App* dt = app.add_subcommand("dt-bound", "Monte-Carlo DT achievability bound");
  add_common(dt, c);
  add_channel(dt, c);
  add_scheme(dt, c);
  dt->add_option("--N", c.dna_length, "DNA sequence length");
  dt->add_option("--V", trials, "Monte-Carlo trials");
  dt->add_option("--rate", rate, "rate for the matched threshold (bits/nt)");
  dt->add_option("--threshold", threshold, "explicit threshold in bits");
  dt->add_flag("--literal-threshold", literal_threshold,
               "use the N_o*log2(q_o) message count instead of rate*N");
  dt->add_flag("--pessimistic-invalid", pessimistic,
               "count drift-overflow samples as bound contribution 1");

  CLI::App* fer = app.add_subcommand("simulate-fer", "frame error rate of the concatenated code");
  add_common(fer, c);
  add_channel(fer, c);
  add_scheme(fer, c);
  fer->add_option("--Qp", lifting, "protograph lifting factor");
  fer->add_option("--protograph", protograph, "b1|b2|auto|file");
  fer->add_option("--bp-iters", bp_iters, "max BP iterations");
  fer->add_option("--turbo-iters", turbo_iters, "max turbo iterations");
  fer->add_option("--max-frames", max_frames, "stop rule: frame cap");
  fer->add_option("--max-errors", max_errors, "stop rule: error cap");

  CLI::App* nr = app.add_subcommand("normalized-rate", "rate vs the DT-bound maximum");
  add_common(nr, c);
  add_channel(nr, c);
  add_scheme(nr, c);
  nr->add_option("--Qp", lifting, "protograph lifting factor");
  nr->add_option("--protograph", protograph, "b1|b2|auto|file");
  nr->add_option("--V", trials, "Monte-Carlo trials");
  nr->add_option("--target-fer", target_fer, "FER target for the threshold search");

  CLI::App* vc = app.add_subcommand("validate-codebook", "check a codebook file");
  vc->add_option("file", cb_path, "codebook file")->required();
  vc->add_flag("--strict", strict_validate, "fail below min edit distance 4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    apply_config(sub, c);
    if (sub == cs) return cmd_channel_sample(c, count, length);
    if (sub == dt) return cmd_dt_bound(c, trials, rate, threshold, literal_threshold, pessimistic);
    if (sub == fer)
      return cmd_simulate_fer(c, lifting, protograph, bp_iters, turbo_iters, max_frames, max_errors);
    if (sub == nr) return cmd_normalized_rate(c, lifting, protograph, trials, target_fer);
    if (sub == vc) return cmd_validate_codebook(cb_path, strict_validate);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
