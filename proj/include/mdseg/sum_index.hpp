#ifndef MDSEG_SUM_INDEX_HPP
#define MDSEG_SUM_INDEX_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "mdseg/distance.hpp"
#include "mdseg/image.hpp"

namespace mdseg {

/// Order-statistics index over the pixel values of one image, split by side.
///
/// All pixel values are ranked once (ties by PixelId). Each side keeps a
/// Fenwick tree over those ranks holding member counts and value sums, so the
/// sorted view of a side and its prefix sums are available without ever
/// moving elements: insertion and deletion are O(log n), and so is
/// sum_{i in side} |a_i - q| for an arbitrary query point q.
class SumIndex {
 public:
  SumIndex() = default;

  SumIndex(std::span<const double> values, const Partition& part) { rebuild(values, part); }

  void rebuild(std::span<const double> values, const Partition& part) {
    const std::size_t n = values.size();
    if (part.size() != n) throw DimensionMismatch("partition does not match image");
    std::vector<PixelId> order(n);
    std::iota(order.begin(), order.end(), PixelId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](PixelId a, PixelId b) { return values[a] < values[b]; });
    sorted_.resize(n);
    rank_.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      sorted_[r] = values[order[r]];
      rank_[order[r]] = static_cast<std::uint32_t>(r);
    }
    for (auto& tree : trees_) tree.assign(n + 1, Node{});
    totals_ = {};
    for (std::size_t r = 0; r < n; ++r) {
      const Side s = part[order[r]];
      Node& leaf = trees_[slot(s)][r + 1];
      leaf.sum += sorted_[r];
      leaf.count += 1;
      totals_[slot(s)].sum += sorted_[r];
      totals_[slot(s)].count += 1;
    }
    // Linear-time Fenwick construction.
    for (auto& tree : trees_) {
      for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t parent = i + (i & (~i + 1));
        if (parent <= n) {
          tree[parent].sum += tree[i].sum;
          tree[parent].count += tree[i].count;
        }
      }
    }
  }

  std::size_t size() const noexcept { return sorted_.size(); }
  std::size_t count(Side s) const noexcept { return static_cast<std::size_t>(totals_[slot(s)].count); }
  double sum(Side s) const noexcept { return totals_[slot(s)].sum; }

  void insert(Side s, PixelId k) { update(s, k, +1); }
  void erase(Side s, PixelId k) { update(s, k, -1); }

  /// sum_{i in side} |a_i - q|
  double abs_dev_sum(Side s, double q) const {
    const auto pos = static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), q) -
                                              sorted_.begin());
    const Node below = prefix(s, pos);
    const Node& all = totals_[slot(s)];
    const double c_le = static_cast<double>(below.count);
    const double c_gt = static_cast<double>(all.count - below.count);
    return (q * c_le - below.sum) + ((all.sum - below.sum) - q * c_gt);
  }

  /// sum_{i in side} f_pair(x, a_i, p), using
  /// |x + a - 2p| = |a - (2p - x)|.
  double row_sum(Side s, double x, double p) const {
    return abs_dev_sum(s, 2.0 * p - x) - abs_dev_sum(s, x);
  }

  /// Values of one side in ascending order (O(n); for inspection and tests).
  std::vector<double> sorted_values(Side s) const {
    std::vector<double> out;
    for (std::size_t r = 0; r < sorted_.size(); ++r) {
      if (prefix(s, r + 1).count - prefix(s, r).count == 1) out.push_back(sorted_[r]);
    }
    return out;
  }

 private:
  struct Node {
    double sum = 0.0;
    std::int64_t count = 0;
  };

  void update(Side s, PixelId k, int sign) {
    auto& tree = trees_[slot(s)];
    const std::size_t n = sorted_.size();
    const double v = sorted_[rank_[k]];
    for (std::size_t i = rank_[k] + 1; i <= n; i += i & (~i + 1)) {
      tree[i].sum += sign * v;
      tree[i].count += sign;
    }
    totals_[slot(s)].sum += sign * v;
    totals_[slot(s)].count += sign;
  }

  // Aggregate over ranks [0, pos).
  Node prefix(Side s, std::size_t pos) const {
    const auto& tree = trees_[slot(s)];
    Node acc;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) {
      acc.sum += tree[i].sum;
      acc.count += tree[i].count;
    }
    return acc;
  }

  std::vector<double> sorted_;
  std::vector<std::uint32_t> rank_;
  std::array<std::vector<Node>, 2> trees_;
  std::array<Node, 2> totals_{};
};

}  // namespace mdseg

#endif  // MDSEG_SUM_INDEX_HPP
