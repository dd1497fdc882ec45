#ifndef MDSEG_EVALMETRICS_HPP
#define MDSEG_EVALMETRICS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mdseg/config.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"
#include "mdseg/rng.hpp"
#include "mdseg/set_metric.hpp"
#include "mdseg/state.hpp"

namespace mdseg {

/// Dice similarity coefficient 2|A n B| / (|A| + |B|).
inline double dsc(const PixelSet& a, const PixelSet& b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) throw InvalidArgument("DSC is undefined for two empty sets");
  return 2.0 * static_cast<double>(intersection_size(a, b)) / static_cast<double>(total);
}

inline double dsc(const Mask& a, const Mask& b) {
  if (a.size() != b.size()) throw DimensionMismatch("masks differ in size");
  std::size_t both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) both += (a[i] && b[i]) ? 1 : 0;
  const std::size_t total = a.count() + b.count();
  if (total == 0) throw InvalidArgument("DSC is undefined for two empty masks");
  return 2.0 * static_cast<double>(both) / static_cast<double>(total);
}

inline Mask invert(const Mask& m) {
  Mask out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) out.set(i, !m[i]);
  return out;
}

/// Residual of laying the inverted segmentation over the truth: 1 where a
/// truth-foreground pixel was missed, 0 everywhere else. A perfect result is
/// all black; an empty segmentation reproduces the truth.
inline Image overlay(const Mask& truth, const Mask& segmented) {
  if (truth.size() != segmented.size()) throw DimensionMismatch("masks differ in size");
  Image out(truth.width(), truth.height());
  for (std::size_t i = 0; i < truth.size(); ++i) out[i] = (truth[i] && !segmented[i]) ? 1.0 : 0.0;
  return out;
}

/// One sample of L along the nested chain through the true partition.
/// offset < 0: that many truth side-1 pixels moved out of side 1;
/// offset > 0: that many truth side-2 pixels moved into side 1.
struct ChainPoint {
  std::int64_t offset = 0;
  double L_value = 0.0;
};

namespace detail {

inline void shuffle(std::vector<PixelId>& v, std::uint64_t seed, std::uint64_t stream) {
  RngStream rng(seed, stream);
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace detail

/// Walks the chain R^{n1-1} ... R^1, S, T^1 ... T^{n2-1} in a seeded random
/// transfer order, sampling L at every multiple of `step`. Endpoints that
/// would empty a side are not evaluated. Points come back sorted by offset.
inline std::vector<ChainPoint> landscape_chain(const Image& img, const Partition& truth, const Targets& targets,
                                               std::uint64_t order_seed, std::size_t step) {
  if (step == 0) throw InvalidArgument("step must be positive");
  if (truth.size() != img.size()) throw DimensionMismatch("truth does not match image");
  std::vector<ChainPoint> points;
  {
    SegState st(img.values(), truth, targets);
    points.push_back({0, st.distance()});
  }
  for (Side moving : {Side::one, Side::two}) {
    std::vector<PixelId> order = truth.members(moving);
    detail::shuffle(order, order_seed, moving == Side::one ? 1 : 2);
    SegState st(img.values(), truth, targets);
    const std::int64_t sign = moving == Side::one ? -1 : 1;
    // stop one short of emptying the moving side
    for (std::size_t t = 0; t + 1 < order.size(); ++t) {
      st.transfer(order[t]);
      if ((t + 1) % step == 0) points.push_back({sign * static_cast<std::int64_t>(t + 1), st.distance()});
    }
  }
  std::sort(points.begin(), points.end(), [](const ChainPoint& a, const ChainPoint& b) { return a.offset < b.offset; });
  return points;
}

inline const ChainPoint& chain_argmin(const std::vector<ChainPoint>& pts) {
  if (pts.empty()) throw InvalidArgument("empty chain");
  return *std::min_element(pts.begin(), pts.end(),
                           [](const ChainPoint& a, const ChainPoint& b) { return a.L_value < b.L_value; });
}

}  // namespace mdseg

#endif  // MDSEG_EVALMETRICS_HPP
