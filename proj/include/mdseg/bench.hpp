#ifndef MDSEG_BENCH_HPP
#define MDSEG_BENCH_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mdseg/config.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"
#include "mdseg/pipeline.hpp"
#include "mdseg/synthgen.hpp"

namespace mdseg {

/// Timing of one patch length. Only T and N are stored; every ratio column is
/// derived on demand.
struct BenchRecord {
  Acceleration accel = Acceleration::indexed;
  std::size_t L = 0;
  double T = 0.0;             // seconds for one full patch-wise segmentation
  std::size_t N = 0;          // windows in the grid
  std::size_t timed = 0;      // windows actually timed (N unless sampled)

  double T1() const { return T / static_cast<double>(N); }
  double T1_per_Lk(int k) const { return T1() / std::pow(static_cast<double>(L), k); }

  // Display units of the published runtime table: T1 in 1e-5 s, the L^3
  // column scaled by a further 1e2 and the L^4 column by 1e3.
  double T1_display() const { return T1() * 1e5; }
  double ratio_display(int k) const {
    const double base = T1_display() / std::pow(static_cast<double>(L), k);
    if (k == 3) return base * 1e2;
    if (k == 4) return base * 1e3;
    return base;
  }
};

struct BenchOptions {
  std::vector<std::size_t> lengths{4, 8, 16, 32, 36, 40, 44, 48};
  std::size_t reps = 1;
  std::size_t size = 200;
  double sigma = 0.5;
  std::uint64_t seed = 0;
  std::size_t stride = 2;
  // 0 times every window; otherwise an evenly spaced subset of at most this
  // many windows is timed and T is extrapolated as T1 * N.
  std::size_t max_windows = 0;
  std::vector<Acceleration> modes{Acceleration::naive, Acceleration::indexed};
};

/// The benchmark input: default circle on a size x size canvas plus noise.
inline Image bench_image(const BenchOptions& opt) {
  const Synthetic s = make_shape(default_shape(ShapeKind::circle, opt.size, opt.size));
  return add_noise(s.image, {opt.sigma, opt.seed});
}

namespace detail {

inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> idx;
  if (cap == 0 || cap >= n) {
    idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
  }
  for (std::size_t j = 0; j < cap; ++j) idx.push_back(j * n / cap);
  return idx;
}

}  // namespace detail

/// Times `reps` patch-wise segmentations per length and mode, strictly
/// serially. Only the per-window optimisation is timed; voting is excluded.
inline std::vector<BenchRecord> bench_harness(const BenchOptions& opt, const SegConfig& base = {}) {
  if (opt.reps == 0) throw InvalidArgument("reps must be positive");
  const Image img = bench_image(opt);
  std::vector<BenchRecord> out;
  for (Acceleration accel : opt.modes) {
    for (std::size_t L : opt.lengths) {
      if (L == 0 || L > opt.size) throw InvalidArgument("patch length " + std::to_string(L) + " exceeds image side");
      const PatchGrid grid = extract_patches(img.width(), img.height(), L, opt.stride);
      const auto picks = detail::sample_indices(grid.size(), opt.max_windows);
      SegConfig cfg = base;
      cfg.accel = accel;
      double total = 0.0;
      for (std::size_t rep = 0; rep < opt.reps; ++rep) {
        for (std::size_t i : picks) {
          const Window& w = grid.windows[i];
          const Image patch = img.crop(w.top, w.left, L, L);
          SegConfig local = cfg;
          local.init_seed = patch_seed(cfg.init_seed, w.top * img.width() + w.left);
          const auto t0 = std::chrono::steady_clock::now();
          const RunResult r = run(patch, local);
          total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          if (r.partition.size() != patch.size()) throw Error("internal", "partition size mismatch");
        }
      }
      BenchRecord rec;
      rec.accel = accel;
      rec.L = L;
      rec.N = grid.size();
      rec.timed = picks.size();
      const double t1 = total / static_cast<double>(opt.reps) / static_cast<double>(picks.size());
      rec.T = t1 * static_cast<double>(rec.N);
      out.push_back(rec);
    }
  }
  return out;
}

}  // namespace mdseg

#endif  // MDSEG_BENCH_HPP
