// Acceptance run: one PASS/FAIL line per criterion, exit status = number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mdseg/mdseg.hpp"
#include "oracle.hpp"
#include "test_helpers.hpp"

using namespace mdseg;
using testing_helpers::to_labels;
using testing_helpers::to_partition;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

SegConfig patch_cfg() {
  SegConfig c;
  c.patch_len = 8;
  return c;
}

// --- 1 ---------------------------------------------------------------
Verdict noiseless_shapes() {
  Verdict v;
  const std::pair<ShapeKind, const char*> kinds[] = {
      {ShapeKind::circle, "circle"}, {ShapeKind::square, "square"}, {ShapeKind::triangle, "triangle"},
      {ShapeKind::star, "star"}};
  for (auto [kind, name] : kinds) {
    const Synthetic s = make_shape(default_shape(kind, 200, 200));
    for (SegmentMode mode : {SegmentMode::full, SegmentMode::patch}) {
      SegConfig c = mode == SegmentMode::full ? SegConfig{} : patch_cfg();
      c.median_window = 1;
      const auto t0 = Clock::now();
      const double d = dsc(segment(s.image, c, mode).mask, s.truth);
      const double secs = since(t0);
      v.detail << " " << name << "/" << to_string(mode) << "=" << d << " (" << fmt(secs, 2) << "s)";
      v.require(d == 1.0, std::string(name) + " DSC");
      v.require(secs < 60.0, std::string(name) + " runtime");
    }
  }
  return v;
}

// --- 2 ---------------------------------------------------------------
Verdict mild_noise() {
  Verdict v;
  const Synthetic s = make_shape(default_shape(ShapeKind::circle, 200, 200));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SegConfig c = patch_cfg();
    c.init_seed = seed;
    c.median_window = 3;
    const double d = dsc(segment(add_noise(s.image, {0.1, seed}), c, SegmentMode::patch).mask, s.truth);
    v.detail << " seed" << seed << "=" << fmt(d);
    v.require(d >= 0.99, "seed " + std::to_string(seed));
  }
  return v;
}

// --- 3 ---------------------------------------------------------------
Verdict landscape() {
  Verdict v;
  const auto t0 = Clock::now();
  const Synthetic s = make_shape(default_shape(ShapeKind::circle, 200, 200));
  const Partition truth = Partition::from_mask(s.truth);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Image img = add_noise(s.image, {0.1, seed});
    const auto pts = landscape_chain(img, truth, {1.0, 0.0}, seed, 50);
    const std::int64_t at = chain_argmin(pts).offset;
    v.detail << " seed" << seed << " argmin=" << at;
    v.require(at == 0, "seed " + std::to_string(seed));
  }
  const double secs = since(t0);
  v.detail << " (" << fmt(secs, 2) << "s)";
  v.require(secs < 120.0, "runtime");
  return v;
}

// --- 4 ---------------------------------------------------------------
Verdict clean_qr() {
  Verdict v;
  const Synthetic s = make_pseudo_qr(100, 100, 5000, 0);
  const double patch = dsc(segment(s.image, patch_cfg(), SegmentMode::patch).mask, s.truth);
  const double together = dsc(segment(s.image, patch_cfg(), SegmentMode::together).mask, s.truth);
  v.detail << " patch=" << fmt(patch) << " together=" << fmt(together);
  v.require(patch >= 0.50 && patch <= 0.75, "patch band [0.50, 0.75]");
  v.require(together >= 0.90, "together >= 0.90");
  return v;
}

// --- 5 ---------------------------------------------------------------
Verdict noisy_qr() {
  Verdict v;
  const std::pair<double, double> bands[] = {{0.1, 0.88}, {0.5, 0.73}, {0.8, 0.63}};
  for (auto [sigma, floor] : bands) {
    std::vector<double> ds;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Synthetic s = make_pseudo_qr(100, 100, 5000, seed);
      SegConfig c = patch_cfg();
      c.init_seed = seed;
      ds.push_back(dsc(segment(add_noise(s.image, {sigma, seed}), c, SegmentMode::together).mask, s.truth));
    }
    const double med = median(ds);
    v.detail << " sigma" << sigma << " median=" << fmt(med) << " min=" << fmt(*std::min_element(ds.begin(), ds.end()));
    v.require(med >= floor, "sigma " + fmt(sigma, 1));
  }
  return v;
}

// --- 6 ---------------------------------------------------------------
Verdict bench_structure() {
  Verdict v;
  const std::vector<std::size_t> lengths{4, 8, 16, 32, 36, 40, 44, 48};
  const std::vector<std::size_t> expected{9801, 9409, 8649, 7225, 6889, 6561, 6241, 5929};
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const std::size_t n = extract_patches(200, 200, lengths[i], 2).size();
    v.require(n == expected[i], "N at L=" + std::to_string(lengths[i]));
  }
  v.detail << " N column matches";

  BenchOptions opt;
  opt.lengths = {32, 36, 40, 44, 48};
  opt.modes = {Acceleration::naive};
  opt.max_windows = 60;
  const auto recs = bench_harness(opt);
  double lo = INFINITY, hi = 0.0;
  v.detail << "; naive T1/L^4 (x1e-2):";
  for (const BenchRecord& r : recs) {
    v.require(r.N == expected[3 + static_cast<std::size_t>(&r - recs.data())], "bench N");
    const double ratio = r.ratio_display(4);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    v.detail << " L" << r.L << "=" << fmt(ratio, 2);
  }
  v.detail << " spread x" << fmt(hi / lo, 2) << " (" << opt.max_windows << " windows timed per L)";
  v.require(hi / lo <= 2.0, "T1/L^4 spread <= x2");
  return v;
}

// --- 7 ---------------------------------------------------------------
Verdict oracle_suite() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(7);
  std::size_t bad_a = 0, bad_b = 0, bad_c = 0, bad_d = 0;
  for (int t = 0; t < 1000; ++t) {
    auto inst = oracle::random_instance(gen, 2 + static_cast<std::size_t>(t) % 11);
    const Partition part = to_partition(inst.labels);
    const Targets tg{1.0, 0.0};

    const double lib = distance(inst.values, part, tg);
    const double brute = oracle::distance(inst.values, inst.labels, 1.0, 0.0);
    if (std::abs(lib - brute) > 1e-9 * std::max(1.0, std::abs(brute))) ++bad_b;

    SegState st(inst.values, part, tg);
    for (std::size_t k = 0; k < inst.values.size(); ++k) {
      if (!st.transferable(static_cast<PixelId>(k))) continue;
      auto moved = inst.labels;
      moved[k] = 3 - moved[k];
      const double diff = distance(inst.values, to_partition(moved), tg) - lib;
      if (std::abs(st.netgain_exact(static_cast<PixelId>(k)) - diff) > 1e-12) ++bad_a;
    }

    SegConfig cfg;
    cfg.tset_mode = t % 2 ? TsetMode::strict : TsetMode::sorted;
    double accepted = 0.0;
    SegState walk(inst.values, part, tg);
    for (std::size_t s = 0; s < cfg.max_sweeps; ++s) {
      const SweepResult r = sweep(walk, cfg, s);
      accepted += r.out_of_one.netgain_total() + r.out_of_two.netgain_total();
      if (r.stats.moved() == 0) break;
    }
    const auto final_labels = to_labels(walk.partition());
    if (!oracle::is_local_min(inst.values, final_labels, 1.0, 0.0)) ++bad_c;
    const RunResult rr = run(inst.values, part, cfg);
    if (!(rr.partition == walk.partition())) ++bad_c;
    if (std::abs(accepted - (oracle::distance(inst.values, final_labels, 1.0, 0.0) - brute)) > 1e-10) ++bad_d;
  }
  const double secs = since(t0);
  v.detail << " (a) netgain mismatches=" << bad_a << " (b) distance mismatches=" << bad_b
           << " (c) non-local-min endings=" << bad_c << " (d) telescoping mismatches=" << bad_d << " (" << fmt(secs, 2)
           << "s)";
  v.require(bad_a == 0, "a");
  v.require(bad_b == 0, "b");
  v.require(bad_c == 0, "c");
  v.require(bad_d == 0, "d");
  v.require(secs < 60.0, "runtime");
  return v;
}

// --- 8 ---------------------------------------------------------------
Verdict metric_suite() {
  Verdict v;
  std::mt19937_64 gen(8);
  std::bernoulli_distribution coin(0.5);
  auto subset = [&] {
    std::vector<PixelId> ids;
    for (PixelId i = 0; i < 16; ++i) {
      if (coin(gen)) ids.push_back(i);
    }
    return PixelSet(std::move(ids));
  };
  std::size_t violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const PixelSet a = subset(), b = subset(), c = subset();
    const std::size_t ab = delta(a, b);
    const std::size_t lo = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    const bool ok = delta(a, a) == 0 && (ab == 0) == (a == b) && ab == delta(b, a) &&
                    ab <= delta(a, c) + delta(c, b) && lo <= ab && ab <= std::max(a.size(), b.size());
    violations += ok ? 0 : 1;
  }
  v.detail << " violations=" << violations << " over 10000 triples";
  v.require(violations == 0, "axioms or bounds");
  return v;
}

// --- 9 ---------------------------------------------------------------
Verdict lemma_checks() {
  Verdict v;
  std::mt19937_64 gen(9);
  SegConfig strict;
  strict.tset_mode = TsetMode::strict;
  std::size_t returns = 0;
  for (int t = 0; t < 1000; ++t) {
    auto inst = oracle::random_instance(gen, 3 + static_cast<std::size_t>(t) % 10);
    SegState st(inst.values, to_partition(inst.labels), {1.0, 0.0});
    const TransferSet ts = build_transfer_set(st, Side::one, strict);
    st.apply_transfer(ts.pixels);
    for (PixelId k : ts.pixels) {
      if (st.transferable(k) && st.netgain_exact(k) < 0.0) ++returns;
    }
  }
  v.detail << " negative return netgains=" << returns;
  v.require(returns == 0, "moved pixels stay");

  std::vector<double> meds;
  for (std::size_t n : {10u, 100u, 1000u}) {
    std::vector<double> gaps;
    for (int t = 0; t < 30; ++t) {
      auto inst = oracle::random_instance(gen, n);
      SegState st(inst.values, to_partition(inst.labels), {1.0, 0.0});
      for (std::size_t k = 0; k < n; k += std::max<std::size_t>(1, n / 10)) {
        const auto id = static_cast<PixelId>(k);
        if (st.transferable(id)) gaps.push_back(std::abs(st.netgain_asymptotic(id) - st.netgain_exact(id)));
      }
    }
    meds.push_back(median(gaps));
  }
  v.detail << "; median |asymptotic-exact| n=10:" << meds[0] << " n=100:" << meds[1] << " n=1000:" << meds[2];
  v.require(meds[0] > meds[1] && meds[1] > meds[2], "gap decreasing");
  return v;
}

// --- 10 --------------------------------------------------------------
Verdict round_trips() {
  Verdict v;
  std::mt19937_64 gen(10);
  std::normal_distribution<double> nd(0.4, 2.0);
  Image img(33, 21);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = nd(gen);
  const std::string enc = encode_image(img, ImageFormat::float64);
  const Image back = decode_image(std::vector<unsigned char>(enc.begin(), enc.end()));
  const bool float_ok = back == img && encode_image(back, ImageFormat::float64) == enc;
  v.require(float_ok, "float image");

  RunReport rep;
  rep.input = "x.f64";
  rep.mode = "patch";
  rep.config.patch_len = 8;
  rep.config.init_seed = 123456789012345ull;
  rep.dsc = 0.1 + 0.2;
  rep.final_distance = std::nextafter(1.0, 2.0);
  SweepStats s;
  s.L_before = 1.0 / 3.0;
  s.L_after = 2.0 / 7.0;
  s.moved_1to2 = 4;
  s.elapsed = 0.000123;
  rep.sweeps = {s};
  rep.timings = {{"segment", 1.5e-3}, {"total", 2.0}};
  const std::string j1 = serialize(rep);
  const bool json_ok = serialize(parse_report(j1)) == j1 && parse_report(j1) == rep;
  v.require(json_ok, "JSON report");

  std::size_t restore_bad = 0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t w = 3 + static_cast<std::size_t>(t) % 9, h = 2 + static_cast<std::size_t>(t) % 7;
    Image x(w, h);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = t % 3 ? u(gen) : std::floor(4 * u(gen)) / 4;
    Mask m(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, coin(gen));
    const SortedImage st = sort_transform(x);
    Mask sorted(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) sorted.set(i, m[st.mapping.forward[i]]);
    if (!(restore(sorted, st.mapping) == m)) ++restore_bad;
  }
  v.require(restore_bad == 0, "sort/restore");
  v.detail << " float=" << (float_ok ? "ok" : "bad") << " json=" << (json_ok ? "ok" : "bad")
           << " sort/restore mismatches=" << restore_bad << "/100";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"noiseless shapes segment exactly (full and patch)", noiseless_shapes},
      {"mild-noise circle, patch mode + median 3", mild_noise},
      {"distance landscape minimum at the true partition", landscape},
      {"clean pseudo-QR: patch band and segmenting-together", clean_qr},
      {"noisy pseudo-QR with segmenting-together", noisy_qr},
      {"runtime table structure and naive L^4 scaling", bench_structure},
      {"oracle equivalence on small instances", oracle_suite},
      {"set metric axioms and bounds", metric_suite},
      {"finite-sample lemma checks", lemma_checks},
      {"format and transform round trips", round_trips},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    failed += v.pass ? 0 : 1;
    std::cout << "criterion " << (i + 1) << ": " << (v.pass ? "PASS" : "FAIL") << " - " << criteria[i].first << " |"
              << v.detail.str() << " {" << fmt(since(t0), 1) << "s}" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed;
}
