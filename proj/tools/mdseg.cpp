// mdseg: synthesize, segment and evaluate grayscale images with the
// minimum-distance two-region segmenter.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdseg/mdseg.hpp"

namespace {

using namespace mdseg;

constexpr std::size_t kDefaultPatchLen = 8;

// Errors detected while checking arguments; reported with exit code 2.
struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error("usage", what) {}
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("write failed on '" + path + "'");
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& s) {
  const auto x = s.find_first_of("xX");
  try {
    if (x == std::string::npos) {
      const auto n = std::stoull(s);
      return {n, n};
    }
    return {std::stoull(s.substr(0, x)), std::stoull(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw UsageError("bad size '" + s + "', expected WxH");
  }
}

std::string real_text(double v) { return nlohmann::json(v).dump(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- synth -------------------------------------------------------------

struct SynthArgs {
  std::string kind = "circle";
  std::string size;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> count;
  std::string out;
  std::string truth;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* c = app.add_subcommand("synth", "generate a synthetic image and its truth mask");
  c->add_option("--kind", a.kind, "circle|square|triangle|star|qr")
      ->check(CLI::IsMember({"circle", "square", "triangle", "star", "qr"}));
  c->add_option("--size", a.size, "WxH (default 200x200, qr 100x100)");
  c->add_option("--sigma", a.sigma, "noise standard deviation")->check(CLI::NonNegativeNumber);
  c->add_option("--seed", a.seed, "noise and pseudo-QR seed");
  c->add_option("--count", a.count, "qr: foreground pixels (default half the image)");
  c->add_option("--out", a.out, "observed image (.f64 keeps full precision)")->required();
  c->add_option("--truth", a.truth, "truth mask");
}

int run_synth(const SynthArgs& a) {
  const ShapeKind kind = parse_shape_kind(a.kind);
  const bool qr = kind == ShapeKind::pseudo_qr;
  const auto [w, h] = a.size.empty() ? std::pair<std::size_t, std::size_t>{qr ? 100 : 200, qr ? 100 : 200}
                                     : parse_size(a.size);
  if (w == 0 || h == 0) throw UsageError("size must be positive");
  if (a.count && !qr) throw UsageError("--count only applies to --kind qr");
  const Synthetic s = qr ? make_pseudo_qr(w, h, a.count.value_or(w * h / 2), a.seed)
                         : make_shape(default_shape(kind, w, h));
  write_image(a.out, add_noise(s.image, {a.sigma, a.seed}));
  if (!a.truth.empty()) write_mask(a.truth, s.truth);
  return 0;
}

// --- segment -----------------------------------------------------------

struct SegmentArgs {
  std::string in;
  std::string mode = "full";
  SegConfig cfg;
  std::string netgain = "exact";
  std::string tset = "sorted";
  std::string init = "random";
  std::string accel = "indexed";
  std::optional<std::size_t> patch_len;
  std::string out;
  std::string report;
  std::string truth;
};

void add_segment(CLI::App& app, SegmentArgs& a) {
  auto* c = app.add_subcommand("segment", "segment an image into foreground and background");
  c->add_option("--in", a.in, "input image")->required();
  c->add_option("--mode", a.mode, "full|patch|together")->check(CLI::IsMember({"full", "patch", "together"}));
  c->add_option("--p1", a.cfg.p1, "foreground target intensity");
  c->add_option("--p2", a.cfg.p2, "background target intensity");
  c->add_option("--patch-len", a.patch_len, "window side (patch and together modes, default 8)");
  c->add_option("--stride", a.cfg.stride, "window stride");
  c->add_option("--vote-threshold", a.cfg.vote_threshold, "foreground vote fraction");
  c->add_option("--netgain", a.netgain, "exact|asymptotic")->check(CLI::IsMember({"exact", "asymptotic"}));
  c->add_option("--tset", a.tset, "strict|sorted")->check(CLI::IsMember({"strict", "sorted"}));
  c->add_option("--init", a.init, "random|threshold")->check(CLI::IsMember({"random", "threshold"}));
  c->add_option("--accel", a.accel, "indexed|naive")->check(CLI::IsMember({"indexed", "naive"}));
  c->add_option("--seed", a.cfg.init_seed, "initialisation seed");
  c->add_option("--max-sweeps", a.cfg.max_sweeps, "sweep cap");
  c->add_option("--median-window", a.cfg.median_window, "median filter window (1 disables)");
  c->add_option("--out", a.out, "output mask")->required();
  c->add_option("--report", a.report, "JSON run report");
  c->add_option("--truth", a.truth, "truth mask for DSC");
}

int run_segment(SegmentArgs a) {
  const auto t0 = std::chrono::steady_clock::now();
  const SegmentMode mode = parse_segment_mode(a.mode);
  if (mode == SegmentMode::full && a.patch_len) throw UsageError("--patch-len is not valid with --mode full");
  if (mode != SegmentMode::full) a.cfg.patch_len = a.patch_len.value_or(kDefaultPatchLen);
  a.cfg.netgain_mode = parse_netgain_mode(a.netgain);
  a.cfg.tset_mode = parse_tset_mode(a.tset);
  a.cfg.init = parse_init_mode(a.init);
  a.cfg.accel = parse_acceleration(a.accel);
  try {
    a.cfg.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  const Image img = read_image(a.in);
  std::optional<Mask> truth;
  if (!a.truth.empty()) {
    truth = read_mask(a.truth);
    if (truth->width() != img.width() || truth->height() != img.height()) {
      throw DimensionMismatch("truth mask does not match the image");
    }
  }
  try {
    a.cfg.validate(img.width(), img.height());
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  const auto t_seg = std::chrono::steady_clock::now();
  const Segmentation seg = segment(img, a.cfg, mode);
  const double seg_time = seconds_since(t_seg);
  write_mask(a.out, seg.mask);

  RunReport rep;
  rep.input = a.in;
  rep.mode = a.mode;
  rep.config = a.cfg;
  rep.seed = a.cfg.init_seed;
  rep.sweeps = seg.sweeps;
  rep.patches = seg.patches;
  const std::size_t fg = seg.mask.count();
  if (fg > 0 && fg < seg.mask.size()) {
    rep.final_distance = distance(img, Partition::from_mask(seg.mask), a.cfg);
  }
  if (truth) rep.dsc = dsc(seg.mask, *truth);
  rep.timings["segment"] = seg_time;
  rep.timings["total"] = seconds_since(t0);
  if (!a.report.empty()) write_text(a.report, serialize(rep));
  if (rep.dsc) std::cout << "dsc " << real_text(*rep.dsc) << "\n";
  return 0;
}

// --- landscape ---------------------------------------------------------

struct LandscapeArgs {
  std::string in;
  std::string truth;
  std::size_t step = 1;
  std::uint64_t seed = 0;
  double p1 = 1.0;
  double p2 = 0.0;
  std::string out;
};

void add_landscape(CLI::App& app, LandscapeArgs& a) {
  auto* c = app.add_subcommand("landscape", "sample L along a nested chain through the truth");
  c->add_option("--in", a.in, "observed image")->required();
  c->add_option("--truth", a.truth, "truth mask")->required();
  c->add_option("--step", a.step, "transfers between samples")->check(CLI::PositiveNumber);
  c->add_option("--seed", a.seed, "transfer order seed");
  c->add_option("--p1", a.p1, "foreground target");
  c->add_option("--p2", a.p2, "background target");
  c->add_option("--out", a.out, "CSV output (offset,L)")->required();
}

int run_landscape(const LandscapeArgs& a) {
  const Image img = read_image(a.in);
  const Mask truth = read_mask(a.truth);
  if (truth.width() != img.width() || truth.height() != img.height()) {
    throw DimensionMismatch("truth mask does not match the image");
  }
  const auto pts = landscape_chain(img, Partition::from_mask(truth), {a.p1, a.p2}, a.seed, a.step);
  write_text(a.out, landscape_csv(pts));
  const ChainPoint& best = chain_argmin(pts);
  std::cout << "argmin offset " << best.offset << " L " << real_text(best.L_value) << "\n";
  return 0;
}

// --- bench -------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> lengths{4, 8, 16, 32, 36, 40, 44, 48};
  BenchOptions opt;
  std::vector<std::string> modes{"naive", "indexed"};
  std::string out;
};

void add_bench(CLI::App& app, BenchArgs& a) {
  auto* c = app.add_subcommand("bench", "time patch-wise segmentation across patch lengths");
  c->add_option("--lengths", a.lengths, "comma separated patch lengths")->delimiter(',');
  c->add_option("--reps", a.opt.reps, "repetitions per length")->check(CLI::PositiveNumber);
  c->add_option("--size", a.opt.size, "square image side")->check(CLI::PositiveNumber);
  c->add_option("--sigma", a.opt.sigma, "noise standard deviation")->check(CLI::NonNegativeNumber);
  c->add_option("--seed", a.opt.seed, "noise seed");
  c->add_option("--stride", a.opt.stride, "window stride")->check(CLI::PositiveNumber);
  c->add_option("--max-windows", a.opt.max_windows, "time at most this many evenly spaced windows (0 = all)");
  c->add_option("--modes", a.modes, "naive,indexed")->delimiter(',')->check(CLI::IsMember({"naive", "indexed"}));
  c->add_option("--out", a.out, "CSV output")->required();
}

int run_bench(BenchArgs a) {
  a.opt.lengths = a.lengths;
  a.opt.modes.clear();
  for (const auto& m : a.modes) a.opt.modes.push_back(parse_acceleration(m));
  for (std::size_t L : a.lengths) {
    if (L == 0 || L > a.opt.size) throw UsageError("patch length " + std::to_string(L) + " exceeds image side");
  }
  write_text(a.out, bench_csv(bench_harness(a.opt)));
  return 0;
}

// --- eval --------------------------------------------------------------

struct EvalArgs {
  std::string pred;
  std::string truth;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* c = app.add_subcommand("eval", "print the Dice coefficient of two masks");
  c->add_option("--pred", a.pred, "predicted mask")->required();
  c->add_option("--truth", a.truth, "truth mask")->required();
}

int run_eval(const EvalArgs& a) {
  const Mask pred = read_mask(a.pred);
  const Mask truth = read_mask(a.truth);
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    throw DimensionMismatch("masks differ in size");
  }
  std::cout << real_text(dsc(pred, truth)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-distance two-region image segmentation"};
  app.require_subcommand(1);
  SynthArgs synth;
  SegmentArgs seg;
  LandscapeArgs land;
  BenchArgs bench;
  EvalArgs eval;
  add_synth(app, synth);
  add_segment(app, seg);
  add_landscape(app, land);
  add_bench(app, bench);
  add_eval(app, eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "synth") return run_synth(synth);
    if (cmd == "segment") return run_segment(seg);
    if (cmd == "landscape") return run_landscape(land);
    if (cmd == "bench") return run_bench(bench);
    if (cmd == "eval") return run_eval(eval);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
