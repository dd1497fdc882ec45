#ifndef MDSEG_IMAGE_HPP
#define MDSEG_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdseg/errors.hpp"

namespace mdseg {

/// Row-major pixel index: index = row * width + col.
using PixelId = std::uint32_t;

/// Side 1 is the bright side (target p1), side 2 the rest (target p2).
enum class Side : std::uint8_t { one = 1, two = 2 };

constexpr Side other(Side s) noexcept { return s == Side::one ? Side::two : Side::one; }
constexpr std::size_t slot(Side s) noexcept { return s == Side::one ? 0 : 1; }

/// Grayscale image of finite real intensities.
class Image {
 public:
  Image() = default;

  Image(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), values_(checked_area(width, height), fill) {}

  Image(std::size_t width, std::size_t height, std::vector<double> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (values_.size() != checked_area(width, height)) {
      throw DimensionMismatch("image has " + std::to_string(values_.size()) + " values, expected " +
                              std::to_string(width * height));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw InvalidArgument("image values must be finite");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  double& at(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Copy of the h x w window whose top-left pixel is (top, left).
  Image crop(std::size_t top, std::size_t left, std::size_t h, std::size_t w) const {
    if (top + h > height_ || left + w > width_) throw InvalidArgument("crop window exceeds image");
    Image out(w, h);
    for (std::size_t r = 0; r < h; ++r) {
      std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>((top + r) * width_ + left), w,
                  out.values_.begin() + static_cast<std::ptrdiff_t>(r * w));
    }
    return out;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static std::size_t checked_area(std::size_t w, std::size_t h) {
    if (w == 0 || h == 0) throw InvalidArgument("image dimensions must be positive");
    return w * h;
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

/// Binary foreground mask. Unlike Partition, either class may be empty.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t width, std::size_t height, bool fill = false)
      : width_(width), height_(height), bits_(width * height, fill ? 1 : 0) {}
  Mask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
      : width_(width), height_(height), bits_(std::move(bits)) {
    if (bits_.size() != width_ * height_) throw DimensionMismatch("mask size does not match dims");
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  bool at(std::size_t row, std::size_t col) const { return bits_[row * width_ + col] != 0; }

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Exhaustive two-way split of the pixels with both sides nonempty.
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<Side> labels) : labels_(std::move(labels)) {
    for (Side s : labels_) {
      if (s == Side::one) ++n1_;
      else if (s == Side::two) ++n2_;
      else throw InvalidArgument("partition label must be 1 or 2");
    }
    if (n1_ == 0 || n2_ == 0) throw EmptySideError("partition has an empty side");
  }

  /// Side 1 = foreground pixels of the mask.
  static Partition from_mask(const Mask& m) {
    std::vector<Side> labels(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) labels[i] = m[i] ? Side::one : Side::two;
    return Partition(std::move(labels));
  }

  Mask to_mask(std::size_t width, std::size_t height) const {
    if (width * height != labels_.size()) throw DimensionMismatch("partition size does not match dims");
    std::vector<std::uint8_t> bits(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) bits[i] = labels_[i] == Side::one ? 1 : 0;
    return Mask(width, height, std::move(bits));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  Side operator[](std::size_t i) const { return labels_[i]; }
  std::span<const Side> labels() const noexcept { return labels_; }

  std::size_t count(Side s) const noexcept { return s == Side::one ? n1_ : n2_; }
  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }

  /// Relabel one pixel. Refuses to empty a side.
  void flip(PixelId k) {
    Side from = labels_.at(k);
    if (count(from) <= 1) throw EmptySideError();
    labels_[k] = other(from);
    if (from == Side::one) { --n1_; ++n2_; }
    else { --n2_; ++n1_; }
  }

  std::vector<PixelId> members(Side s) const {
    std::vector<PixelId> out;
    out.reserve(count(s));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == s) out.push_back(static_cast<PixelId>(i));
    }
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Side> labels_;
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
};

}  // namespace mdseg

#endif  // MDSEG_IMAGE_HPP
