#ifndef MDSEG_DISTANCE_HPP
#define MDSEG_DISTANCE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mdseg/config.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"

namespace mdseg {

constexpr double target(const Targets& t, Side s) noexcept { return s == Side::one ? t.p1 : t.p2; }

/// Pairwise kernel |a + b - 2p| - |a - b|.
///
/// Equivalently 2 sgn((a-p)(b-p)) min(|a-p|, |b-p|): positive when both values
/// sit on the same side of the target, negative when they straddle it.
inline double f_pair(double a, double b, double p) noexcept {
  return std::abs(a + b - 2.0 * p) - std::abs(a - b);
}

/// Sum over all ordered pairs (i, j) of f_pair(a_i, a_j, p), diagonal included.
///
/// O(n log n): the |a_i - a_j| part telescopes over the sorted values, and the
/// |a_i + a_j - 2p| part is a two-pointer split of the sorted residuals.
inline double self_pair_sum(std::vector<double> values, double p) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  for (double& v : values) v -= p;
  std::sort(values.begin(), values.end());

  // sum_{i,j} |b_i - b_j| = 2 sum_k b_(k) (2k - n + 1)
  double spread = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    spread += values[k] * (2.0 * static_cast<double>(k) - static_cast<double>(n) + 1.0);
  }
  spread *= 2.0;

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + values[k];
  const double total = prefix[n];

  // sum_{i,j} |b_i + b_j|: for each i, entries with b_j >= -b_i contribute
  // b_i + b_j, the rest contribute -(b_i + b_j). As b_i grows the split index
  // moves left, so walk it with a single pointer.
  double fold = 0.0;
  std::size_t split = n;  // first index with b_j >= -b_i
  for (std::size_t i = 0; i < n; ++i) {
    const double bi = values[i];
    while (split > 0 && values[split - 1] >= -bi) --split;
    const double upper_count = static_cast<double>(n - split);
    const double upper_sum = total - prefix[split];
    const double lower_count = static_cast<double>(split);
    const double lower_sum = prefix[split];
    fold += (upper_count * bi + upper_sum) - (lower_count * bi + lower_sum);
  }
  return fold - spread;
}

inline std::vector<double> side_values(std::span<const double> values, const Partition& part, Side s) {
  std::vector<double> out;
  out.reserve(part.count(s));
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (part[i] == s) out.push_back(values[i]);
  }
  return out;
}

/// L(S1, S2) = A1 / n1^2 + A2 / n2^2 with A_k the self pair sum of side k.
inline double distance(std::span<const double> values, const Partition& part, const Targets& t) {
  if (values.size() != part.size()) throw DimensionMismatch("partition does not match image");
  if (part.n1() == 0 || part.n2() == 0) throw EmptySideError("distance undefined for an empty side");
  const double n1 = static_cast<double>(part.n1());
  const double n2 = static_cast<double>(part.n2());
  return self_pair_sum(side_values(values, part, Side::one), t.p1) / (n1 * n1) +
         self_pair_sum(side_values(values, part, Side::two), t.p2) / (n2 * n2);
}

inline double distance(const Image& img, const Partition& part, const SegConfig& cfg) {
  return distance(img.values(), part, cfg.targets());
}

}  // namespace mdseg

#endif  // MDSEG_DISTANCE_HPP
