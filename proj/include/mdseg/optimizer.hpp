#ifndef MDSEG_OPTIMIZER_HPP
#define MDSEG_OPTIMIZER_HPP

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "mdseg/config.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"
#include "mdseg/rng.hpp"
#include "mdseg/state.hpp"

namespace mdseg {

/// Pixels accepted for relocation out of `side`, in selection order, with the
/// netgain each had when it was accepted (always < 0).
struct TransferSet {
  Side side = Side::one;
  std::vector<PixelId> pixels;
  std::vector<double> netgains;

  bool empty() const noexcept { return pixels.empty(); }
  double netgain_total() const noexcept {
    double s = 0.0;
    for (double g : netgains) s += g;
    return s;
  }
};

struct SweepStats {
  std::size_t sweep_index = 0;
  double L_before = 0.0;
  double L_after = 0.0;
  std::size_t moved_1to2 = 0;
  std::size_t moved_2to1 = 0;
  double elapsed = 0.0;  // seconds

  std::size_t moved() const noexcept { return moved_1to2 + moved_2to1; }
};

struct SweepResult {
  SweepStats stats;
  TransferSet out_of_one;
  TransferSet out_of_two;
};

struct RunResult {
  Partition partition;
  std::vector<SweepStats> sweeps;
  double final_distance = 0.0;
  bool fell_back_to_exact = false;
};

struct Candidate {
  PixelId pixel;
  double netgain;
};

namespace detail {

inline std::vector<Candidate> screen(const SegState& st, Side side, NetgainMode mode,
                                     const std::vector<bool>* eligible) {
  std::vector<Candidate> out;
  if (st.count(side) <= 1) return out;
  const auto labels = st.partition().labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != side) continue;
    if (eligible && !(*eligible)[i]) continue;
    const auto k = static_cast<PixelId>(i);
    const double g = st.netgain(k, mode);
    if (g < 0.0) out.push_back({k, g});
  }
  return out;
}

// Builds T(side) against `st`, transferring every accepted pixel as it goes
// so each later netgain is taken relative to the already-shrunk side.
inline TransferSet grow_transfer_set(SegState& st, Side side, std::vector<Candidate> candidates,
                                     TsetMode tset, NetgainMode mode) {
  TransferSet ts;
  ts.side = side;
  if (tset == TsetMode::strict) {
    // Candidates are in ascending PixelId order, so a strict `<` keeps the
    // lowest id on ties.
    while (!candidates.empty() && st.count(side) > 1) {
      std::size_t best = 0;
      double best_gain = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const double g = st.netgain(candidates[c].pixel, mode);
        if (g < best_gain) {
          best_gain = g;
          best = c;
        }
      }
      if (!(best_gain < 0.0)) break;
      ts.pixels.push_back(candidates[best].pixel);
      ts.netgains.push_back(best_gain);
      st.transfer(candidates[best].pixel);
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return ts;
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.netgain < b.netgain || (a.netgain == b.netgain && a.pixel < b.pixel);
  });
  for (const Candidate& c : candidates) {
    if (st.count(side) <= 1) break;
    const double g = st.netgain(c.pixel, mode);
    if (!(g < 0.0)) break;
    ts.pixels.push_back(c.pixel);
    ts.netgains.push_back(g);
    st.transfer(c.pixel);
  }
  return ts;
}

}  // namespace detail

/// Pixels of `side` whose single transfer has negative netgain. Empty when the
/// side has only one pixel left.
inline std::vector<PixelId> negative_set(const SegState& st, Side side, NetgainMode mode = NetgainMode::exact) {
  std::vector<PixelId> out;
  for (const Candidate& c : detail::screen(st, side, mode, nullptr)) out.push_back(c.pixel);
  return out;
}

/// T(side) for the current state; `st` itself is not modified.
inline TransferSet build_transfer_set(const SegState& st, Side side, const SegConfig& cfg) {
  SegState scratch = st;
  return detail::grow_transfer_set(scratch, side, detail::screen(st, side, cfg.netgain_mode, nullptr),
                                   cfg.tset_mode, cfg.netgain_mode);
}

/// One round: build and apply T(S1), then build and apply T(S2) over the
/// pixels that were on side 2 when the sweep started. Pixels that just moved
/// in from side 1 are not candidates for moving back.
inline SweepResult sweep(SegState& st, const SegConfig& cfg, std::size_t sweep_index = 0) {
  const auto started = std::chrono::steady_clock::now();
  SweepResult res;
  res.stats.sweep_index = sweep_index;
  res.stats.L_before = st.distance();

  std::vector<bool> was_two(st.size());
  const auto labels = st.partition().labels();
  for (std::size_t i = 0; i < labels.size(); ++i) was_two[i] = labels[i] == Side::two;

  res.out_of_one = detail::grow_transfer_set(st, Side::one, detail::screen(st, Side::one, cfg.netgain_mode, nullptr),
                                             cfg.tset_mode, cfg.netgain_mode);
  res.out_of_two = detail::grow_transfer_set(st, Side::two, detail::screen(st, Side::two, cfg.netgain_mode, &was_two),
                                             cfg.tset_mode, cfg.netgain_mode);

  res.stats.L_after = st.distance();
  res.stats.moved_1to2 = res.out_of_one.pixels.size();
  res.stats.moved_2to1 = res.out_of_two.pixels.size();
  res.stats.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

/// True when no single transferable pixel has negative exact netgain.
inline bool verify_local_min(const SegState& st) {
  for (std::size_t i = 0; i < st.size(); ++i) {
    const auto k = static_cast<PixelId>(i);
    if (st.transferable(k) && st.netgain_exact(k) < 0.0) return false;
  }
  return true;
}

/// Starting partition. Both sides are forced nonempty: if one comes out
/// empty, the pixel closest to that side's target is moved into it.
inline Partition initial_partition(std::span<const double> values, const SegConfig& cfg) {
  const std::size_t n = values.size();
  if (n < 2) throw EmptySideError("an image needs at least two pixels to be split");
  std::vector<Side> labels(n);
  if (cfg.init == InitMode::random_balanced) {
    const CounterRng rng(cfg.init_seed, 0x1A17);
    for (std::size_t i = 0; i < n; ++i) labels[i] = (rng.bits(i) >> 63) ? Side::one : Side::two;
  } else {
    const double mid = 0.5 * (cfg.p1 + cfg.p2);
    for (std::size_t i = 0; i < n; ++i) {
      const bool bright = cfg.p1 > cfg.p2 ? values[i] >= mid : values[i] <= mid;
      labels[i] = bright ? Side::one : Side::two;
    }
  }
  for (Side s : {Side::one, Side::two}) {
    if (std::find(labels.begin(), labels.end(), s) != labels.end()) continue;
    const double p = s == Side::one ? cfg.p1 : cfg.p2;
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(values[i] - p) < std::abs(values[best] - p)) best = i;
    }
    labels[best] = s;
  }
  return Partition(std::move(labels));
}

namespace detail {

// FNV-1a over the side labels. Revisited partitions are recognised by this
// rather than by L, whose incrementally maintained value drifts in the last
// bits along a cycle.
inline std::uint64_t partition_hash(const Partition& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Side s : p.labels()) {
    h ^= static_cast<std::uint64_t>(s);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Alternating sweeps until both transfer sets come back empty.
///
/// In asymptotic mode descent is not guaranteed; a revisited (n1, partition)
/// state is treated as a cycle and the remaining sweeps run in exact mode.
/// Throws NonConvergenceError if max_sweeps is exhausted with moves still
/// pending.
inline RunResult run(std::span<const double> values, Partition init, const SegConfig& cfg) {
  cfg.validate();
  SegState st(values, std::move(init), cfg.targets(), cfg.accel);
  SegConfig active = cfg;
  RunResult out;
  std::set<std::pair<std::size_t, std::uint64_t>> seen;
  bool converged = false;
  for (std::size_t s = 0; s < cfg.max_sweeps; ++s) {
    SweepResult r = sweep(st, active, s);
    out.sweeps.push_back(r.stats);
    if (r.stats.moved() == 0) {
      converged = true;
      break;
    }
    if (active.netgain_mode == NetgainMode::asymptotic &&
        !seen.emplace(st.count(Side::one), detail::partition_hash(st.partition())).second) {
      active.netgain_mode = NetgainMode::exact;
      out.fell_back_to_exact = true;
    }
  }
  if (!converged) {
    throw NonConvergenceError("no fixed point after " + std::to_string(cfg.max_sweeps) + " sweeps");
  }
  out.final_distance = st.distance();
  out.partition = st.partition();
  return out;
}

inline RunResult run(const Image& img, const SegConfig& cfg) {
  return run(img.values(), initial_partition(img.values(), cfg), cfg);
}

}  // namespace mdseg

#endif  // MDSEG_OPTIMIZER_HPP
