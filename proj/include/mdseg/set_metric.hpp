#ifndef MDSEG_SET_METRIC_HPP
#define MDSEG_SET_METRIC_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "mdseg/image.hpp"

namespace mdseg {

/// Sorted, duplicate-free set of pixel ids.
class PixelSet {
 public:
  PixelSet() = default;
  PixelSet(std::initializer_list<PixelId> ids) : PixelSet(std::vector<PixelId>(ids)) {}
  explicit PixelSet(std::vector<PixelId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  static PixelSet from_mask(const Mask& m) {
    std::vector<PixelId> ids;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i]) ids.push_back(static_cast<PixelId>(i));
    }
    return PixelSet(std::move(ids));
  }

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(PixelId k) const { return std::binary_search(ids_.begin(), ids_.end(), k); }
  const std::vector<PixelId>& ids() const noexcept { return ids_; }

  friend bool operator==(const PixelSet&, const PixelSet&) = default;

 private:
  std::vector<PixelId> ids_;
};

inline std::size_t intersection_size(const PixelSet& a, const PixelSet& b) {
  std::size_t n = 0;
  auto i = a.ids().begin();
  auto j = b.ids().begin();
  while (i != a.ids().end() && j != b.ids().end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

/// (|A| - |A n B|) v (|B| - |A n B|).
///
/// Reduces to ||A| - |B|| for nested sets and |A| v |B| for disjoint ones.
inline std::size_t delta(const PixelSet& a, const PixelSet& b) {
  const std::size_t common = intersection_size(a, b);
  return std::max(a.size() - common, b.size() - common);
}

inline bool in_neighborhood(const PixelSet& a, const PixelSet& b, std::size_t xi) { return delta(a, b) <= xi; }

}  // namespace mdseg

#endif  // MDSEG_SET_METRIC_HPP
