#ifndef MDSEG_PIPELINE_HPP
#define MDSEG_PIPELINE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "mdseg/config.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"
#include "mdseg/optimizer.hpp"
#include "mdseg/rng.hpp"

namespace mdseg {

struct Window {
  std::size_t top = 0;
  std::size_t left = 0;
};

/// Square windows of side `patch_len` laid out with a fixed stride.
struct PatchGrid {
  std::size_t patch_len = 0;
  std::size_t stride = 1;
  std::vector<Window> windows;

  std::size_t size() const noexcept { return windows.size(); }
};

namespace detail {

// 0, stride, 2 stride, ... while the window fits, plus one window flush with
// the far edge when the stride skips it.
inline std::vector<std::size_t> origins(std::size_t extent, std::size_t len, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o + len <= extent; o += stride) out.push_back(o);
  if (out.back() + len < extent) out.push_back(extent - len);
  return out;
}

}  // namespace detail

inline PatchGrid extract_patches(std::size_t width, std::size_t height, std::size_t patch_len, std::size_t stride) {
  if (patch_len == 0) throw InvalidArgument("patch length must be positive");
  if (stride == 0) throw InvalidArgument("stride must be at least 1");
  if (patch_len > std::min(width, height)) {
    throw InvalidArgument("patch length " + std::to_string(patch_len) + " exceeds image side");
  }
  PatchGrid grid{patch_len, stride, {}};
  const auto rows = detail::origins(height, patch_len, stride);
  const auto cols = detail::origins(width, patch_len, stride);
  grid.windows.reserve(rows.size() * cols.size());
  for (std::size_t r : rows) {
    for (std::size_t c : cols) grid.windows.push_back({r, c});
  }
  return grid;
}

/// Per-pixel foreground votes and the number of windows covering the pixel.
struct VoteMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint32_t> votes;
  std::vector<std::uint32_t> coverage;

  VoteMap(std::size_t w, std::size_t h) : width(w), height(h), votes(w * h, 0), coverage(w * h, 0) {}

  Mask decide(double threshold) const {
    Mask out(width, height);
    for (std::size_t i = 0; i < votes.size(); ++i) {
      out.set(i, coverage[i] > 0 && static_cast<double>(votes[i]) >= threshold * static_cast<double>(coverage[i]));
    }
    return out;
  }
};

/// Seed for the window whose top-left pixel has row-major index `origin`.
/// Offsetting by the origin index leaves the (0, 0) window on the base seed.
constexpr std::uint64_t patch_seed(std::uint64_t base, std::uint64_t origin) noexcept {
  return base + origin * 0x9E3779B97F4A7C15ULL;
}

/// Foreground mask of one optimised patch. Patch labels are arbitrary, so
/// each side is classified on its own: its pixels are foreground iff the
/// side's mean intensity is strictly nearer p1 than p2. In a patch that
/// straddles an edge this makes the side sitting near p1 the foreground; in a
/// homogeneous patch both sides agree and the whole patch follows its level.
inline Mask align_labels(const Image& patch, const Partition& part, const SegConfig& cfg) {
  double sum1 = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < part.size(); ++i) (part[i] == Side::one ? sum1 : sum2) += patch[i];
  auto bright = [&](double mean) { return std::abs(mean - cfg.p1) < std::abs(mean - cfg.p2); };
  const bool fg1 = bright(sum1 / static_cast<double>(part.n1()));
  const bool fg2 = bright(sum2 / static_cast<double>(part.n2()));
  Mask out(patch.width(), patch.height());
  for (std::size_t i = 0; i < part.size(); ++i) out.set(i, part[i] == Side::one ? fg1 : fg2);
  return out;
}

/// Accumulates the votes of every window of the grid.
///
/// A constant window carries no split information (every partition has the
/// same distance); it skips the optimiser and votes as a block, which is what
/// align_labels would decide for any split of it.
inline VoteMap patch_votes(const Image& img, const SegConfig& cfg, const PatchGrid& grid) {
  VoteMap votes(img.width(), img.height());
  const std::size_t len = grid.patch_len;
  for (const Window& w : grid.windows) {
    const Image patch = img.crop(w.top, w.left, len, len);
    const auto vals = patch.values();
    const bool constant = std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[0]; });

    Mask fg(len, len);
    if (constant) {
      const bool bright = std::abs(vals[0] - cfg.p1) < std::abs(vals[0] - cfg.p2);
      fg = Mask(len, len, bright);
    } else {
      SegConfig local = cfg;
      local.init_seed = patch_seed(cfg.init_seed, w.top * img.width() + w.left);
      try {
        const RunResult r = run(patch, local);
        fg = align_labels(patch, r.partition, cfg);
      } catch (const Error& e) {
        throw PatchError(w.top, w.left, e.what());
      }
    }
    for (std::size_t r = 0; r < len; ++r) {
      for (std::size_t c = 0; c < len; ++c) {
        const std::size_t k = (w.top + r) * img.width() + (w.left + c);
        votes.coverage[k] += 1;
        votes.votes[k] += fg.at(r, c) ? 1 : 0;
      }
    }
  }
  return votes;
}

/// Runs the optimiser on every window independently and combines the aligned
/// labels by per-pixel vote fraction against cfg.vote_threshold.
inline Mask segment_patchwise(const Image& img, const SegConfig& cfg) {
  if (!cfg.patch_len) throw InvalidArgument("patch-wise segmentation needs patch_len");
  cfg.validate(img.width(), img.height());
  const PatchGrid grid = extract_patches(img.width(), img.height(), *cfg.patch_len, cfg.stride);
  return patch_votes(img, cfg, grid).decide(cfg.vote_threshold);
}

/// Binary median over a window x window neighbourhood with replicate padding.
/// For a binary mask the median is the majority of the window.
inline Mask median_filter(const Mask& mask, std::size_t window) {
  if (window == 0 || window % 2 == 0) throw InvalidArgument("median window must be odd and positive");
  if (window == 1) return mask;
  const auto w = static_cast<std::int64_t>(mask.width());
  const auto h = static_cast<std::int64_t>(mask.height());
  const auto half = static_cast<std::int64_t>(window / 2);
  const std::int64_t pw = w + 2 * half;
  const std::int64_t ph = h + 2 * half;

  // Summed-area table over the replicate-padded mask.
  std::vector<std::uint32_t> sat(static_cast<std::size_t>((pw + 1) * (ph + 1)), 0);
  auto at = [&](std::int64_t r, std::int64_t c) -> std::uint32_t& {
    return sat[static_cast<std::size_t>(r * (pw + 1) + c)];
  };
  for (std::int64_t r = 0; r < ph; ++r) {
    const std::int64_t sr = std::clamp<std::int64_t>(r - half, 0, h - 1);
    std::uint32_t row = 0;
    for (std::int64_t c = 0; c < pw; ++c) {
      const std::int64_t sc = std::clamp<std::int64_t>(c - half, 0, w - 1);
      row += mask.at(static_cast<std::size_t>(sr), static_cast<std::size_t>(sc)) ? 1 : 0;
      at(r + 1, c + 1) = at(r, c + 1) + row;
    }
  }

  const auto k = static_cast<std::int64_t>(window);
  const std::uint64_t majority = static_cast<std::uint64_t>(k * k) / 2 + 1;
  Mask out(mask.width(), mask.height());
  for (std::int64_t r = 0; r < h; ++r) {
    for (std::int64_t c = 0; c < w; ++c) {
      const std::uint64_t ones = at(r + k, c + k) + at(r, c) - at(r, c + k) - at(r + k, c);
      out.set(static_cast<std::size_t>(r * w + c), ones >= majority);
    }
  }
  return out;
}

/// forward[t] = original PixelId of transformed entry t.
struct SortMapping {
  std::vector<PixelId> forward;
  std::vector<PixelId> inverse;
};

struct SortedImage {
  Image image;
  SortMapping mapping;
};

/// Rearranges the pixels in nondecreasing row-major order (ties keep their
/// original order) and records where each one came from.
inline SortedImage sort_transform(const Image& img) {
  SortMapping map;
  map.forward.resize(img.size());
  std::iota(map.forward.begin(), map.forward.end(), PixelId{0});
  std::stable_sort(map.forward.begin(), map.forward.end(), [&](PixelId a, PixelId b) { return img[a] < img[b]; });
  map.inverse.resize(img.size());
  Image out(img.width(), img.height());
  for (std::size_t t = 0; t < img.size(); ++t) {
    map.inverse[map.forward[t]] = static_cast<PixelId>(t);
    out[t] = img[map.forward[t]];
  }
  return {std::move(out), std::move(map)};
}

/// Writes each transformed-entry label back to its original pixel.
inline Mask restore(const Mask& transformed, const SortMapping& mapping) {
  if (transformed.size() != mapping.forward.size()) throw DimensionMismatch("mask does not match the mapping");
  Mask out(transformed.width(), transformed.height());
  for (std::size_t t = 0; t < transformed.size(); ++t) out.set(mapping.forward[t], transformed[t]);
  return out;
}

/// Sort, segment patch-wise in the sorted domain (median filter applied
/// there too), restore.
inline Mask segment_together(const Image& img, const SegConfig& cfg) {
  const SortedImage sorted = sort_transform(img);
  const Mask seg = median_filter(segment_patchwise(sorted.image, cfg), cfg.median_window);
  return restore(seg, sorted.mapping);
}

enum class SegmentMode { full, patch, together };

inline SegmentMode parse_segment_mode(std::string_view s) {
  if (s == "full") return SegmentMode::full;
  if (s == "patch") return SegmentMode::patch;
  if (s == "together") return SegmentMode::together;
  throw InvalidArgument("unknown segment mode '" + std::string(s) + "'");
}

inline std::string_view to_string(SegmentMode m) {
  switch (m) {
    case SegmentMode::full: return "full";
    case SegmentMode::patch: return "patch";
    case SegmentMode::together: return "together";
  }
  return "full";
}

struct Segmentation {
  Mask mask;
  std::vector<SweepStats> sweeps;  // full mode only
  std::size_t patches = 0;
};

/// Full pipeline for one mode, including the median post-filter.
inline Segmentation segment(const Image& img, const SegConfig& cfg, SegmentMode mode) {
  cfg.validate(img.width(), img.height());
  Segmentation out;
  switch (mode) {
    case SegmentMode::full: {
      RunResult r = run(img, cfg);
      out.mask = median_filter(r.partition.to_mask(img.width(), img.height()), cfg.median_window);
      out.sweeps = std::move(r.sweeps);
      break;
    }
    case SegmentMode::patch:
      out.mask = median_filter(segment_patchwise(img, cfg), cfg.median_window);
      out.patches = extract_patches(img.width(), img.height(), *cfg.patch_len, cfg.stride).size();
      break;
    case SegmentMode::together:
      out.mask = segment_together(img, cfg);
      out.patches = extract_patches(img.width(), img.height(), *cfg.patch_len, cfg.stride).size();
      break;
  }
  return out;
}

}  // namespace mdseg

#endif  // MDSEG_PIPELINE_HPP
