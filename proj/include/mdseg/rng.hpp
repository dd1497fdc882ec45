#ifndef MDSEG_RNG_HPP
#define MDSEG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mdseg {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the i-th draw of a (seed, stream) pair is a pure
/// function of i, so per-pixel values never depend on evaluation order.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t i) const noexcept {
    return splitmix64(key_ + i * 0xD1B54A32D192ED03ULL);
  }

  /// Uniform on (0, 1], 53-bit resolution.
  constexpr double uniform(std::uint64_t i) const noexcept {
    return static_cast<double>((bits(i) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on draws 2i and 2i+1 (cosine branch only).
  double normal(std::uint64_t i) const noexcept {
    const double u1 = uniform(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, bound) by rejection; `counter` advances past
  /// every draw consumed.
  std::uint64_t below(std::uint64_t bound, std::uint64_t& counter) const noexcept {
    const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
    for (;;) {
      const std::uint64_t x = bits(counter++);
      if (x < limit) return x % bound;
    }
  }

 private:
  std::uint64_t key_;
};

/// Sequential convenience wrapper over CounterRng.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept : rng_(seed, stream) {}

  std::uint64_t next_bits() noexcept { return rng_.bits(counter_++); }
  double next_uniform() noexcept { return rng_.uniform(counter_++); }
  std::uint64_t next_below(std::uint64_t bound) noexcept { return rng_.below(bound, counter_); }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace mdseg

#endif  // MDSEG_RNG_HPP
