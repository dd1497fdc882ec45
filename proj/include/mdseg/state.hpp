#ifndef MDSEG_STATE_HPP
#define MDSEG_STATE_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mdseg/config.hpp"
#include "mdseg/distance.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/image.hpp"
#include "mdseg/sum_index.hpp"

namespace mdseg {

/// Mutable optimisation state: a partition of a fixed image plus the cached
/// self pair sums A1, A2 and the rank index that keeps single-pixel netgains
/// at O(log n).
///
/// The pixel values are viewed, not owned; the image must outlive the state.
class SegState {
 public:
  /// Number of transfers between full rebuilds of the cached sums.
  static constexpr std::size_t kRebuildInterval = 4096;

  SegState(std::span<const double> values, Partition part, Targets targets,
           Acceleration accel = Acceleration::indexed)
      : values_(values), part_(std::move(part)), targets_(targets), accel_(accel) {
    if (values_.size() != part_.size()) throw DimensionMismatch("partition does not match image");
    rebuild();
  }

  SegState(const Image& img, Partition part, const SegConfig& cfg)
      : SegState(img.values(), std::move(part), cfg.targets(), cfg.accel) {}

  const Partition& partition() const noexcept { return part_; }
  std::span<const double> values() const noexcept { return values_; }
  const Targets& targets() const noexcept { return targets_; }
  Acceleration acceleration() const noexcept { return accel_; }
  std::size_t size() const noexcept { return part_.size(); }
  std::size_t count(Side s) const noexcept { return part_.count(s); }
  Side side_of(PixelId k) const { return part_[k]; }

  /// Cached A_k = sum_{i,j in side} f_ij.
  double pair_sum(Side s) const noexcept { return sums_[slot(s)]; }

  double distance() const noexcept {
    const double n1 = static_cast<double>(part_.n1());
    const double n2 = static_cast<double>(part_.n2());
    return sums_[0] / (n1 * n1) + sums_[1] / (n2 * n2);
  }

  /// sum_{i in side} f_pair(x, a_i, p_side)
  double row_sum(Side s, double x) const {
    const double p = target(targets_, s);
    if (accel_ == Acceleration::indexed) return index_.row_sum(s, x, p);
    double acc = 0.0;
    const auto labels = part_.labels();
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (labels[i] == s) acc += f_pair(x, values_[i], p);
    }
    return acc;
  }

  bool transferable(PixelId k) const { return part_.count(part_[k]) > 1; }

  /// L after moving pixel k to the other side, minus L now.
  double netgain_exact(PixelId k) const {
    const Delta d = delta(k);
    const double nf = static_cast<double>(part_.count(d.from));
    const double nt = static_cast<double>(part_.count(other(d.from)));
    const double af = sums_[slot(d.from)];
    const double at = sums_[slot(other(d.from))];
    return (af + d.from_change) / ((nf - 1.0) * (nf - 1.0)) + (at + d.to_change) / ((nt + 1.0) * (nt + 1.0)) -
           af / (nf * nf) - at / (nt * nt);
  }

  /// Same transfer, with the current cardinalities in every denominator:
  /// -2/nf^2 sum_from f_k. + 2/nt^2 sum_to f_k. + f_kk^from/nf^2 + f_kk^to/nt^2.
  double netgain_asymptotic(PixelId k) const {
    const Side from = part_[k];
    if (part_.count(from) <= 1) throw EmptySideError();
    const Side to = other(from);
    const double a = values_[k];
    const double nf = static_cast<double>(part_.count(from));
    const double nt = static_cast<double>(part_.count(to));
    return -2.0 * row_sum(from, a) / (nf * nf) + 2.0 * row_sum(to, a) / (nt * nt) +
           f_pair(a, a, target(targets_, from)) / (nf * nf) + f_pair(a, a, target(targets_, to)) / (nt * nt);
  }

  double netgain(PixelId k, NetgainMode mode) const {
    return mode == NetgainMode::exact ? netgain_exact(k) : netgain_asymptotic(k);
  }

  /// Move one pixel to the other side.
  void transfer(PixelId k) {
    const Delta d = delta(k);
    const Side to = other(d.from);
    sums_[slot(d.from)] += d.from_change;
    sums_[slot(to)] += d.to_change;
    part_.flip(k);
    if (accel_ == Acceleration::indexed) {
      index_.erase(d.from, k);
      index_.insert(to, k);
    }
    if (++mutations_ >= kRebuildInterval) rebuild();
  }

  /// Move a group of pixels that all sit on the same side. Validated up
  /// front, so a rejected call leaves the state untouched.
  void apply_transfer(std::span<const PixelId> pixels) {
    if (pixels.empty()) return;
    const Side from = part_[pixels.front()];
    for (PixelId k : pixels) {
      if (k >= part_.size()) throw InvalidArgument("pixel id out of range");
      if (part_[k] != from) throw InvalidArgument("transfer pixels must share a side");
    }
    if (pixels.size() >= part_.count(from)) throw EmptySideError();
    for (PixelId k : pixels) transfer(k);
  }

  /// Recompute A1, A2 and the index from scratch.
  void rebuild() {
    sums_[0] = self_pair_sum(side_values(values_, part_, Side::one), targets_.p1);
    sums_[1] = self_pair_sum(side_values(values_, part_, Side::two), targets_.p2);
    if (accel_ == Acceleration::indexed) index_.rebuild(values_, part_);
    mutations_ = 0;
  }

  const SumIndex& index() const noexcept { return index_; }

 private:
  struct Delta {
    Side from;
    double from_change;  // A_from' - A_from
    double to_change;    // A_to' - A_to
  };

  Delta delta(PixelId k) const {
    const Side from = part_[k];
    if (part_.count(from) <= 1) throw EmptySideError();
    const Side to = other(from);
    const double a = values_[k];
    const double pf = target(targets_, from);
    const double pt = target(targets_, to);
    return {from, -2.0 * row_sum(from, a) + f_pair(a, a, pf), 2.0 * row_sum(to, a) + f_pair(a, a, pt)};
  }

  std::span<const double> values_;
  Partition part_;
  Targets targets_;
  Acceleration accel_;
  SumIndex index_;
  std::array<double, 2> sums_{};
  std::size_t mutations_ = 0;
};

}  // namespace mdseg

#endif  // MDSEG_STATE_HPP
