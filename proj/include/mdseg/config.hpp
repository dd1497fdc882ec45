#ifndef MDSEG_CONFIG_HPP
#define MDSEG_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mdseg/errors.hpp"

namespace mdseg {

/// `exact` is the literal L difference of a single transfer; `asymptotic`
/// keeps the pre-transfer cardinalities in every denominator.
enum class NetgainMode { exact, asymptotic };

/// `strict` re-takes the argmin over all remaining candidates after every
/// acceptance; `sorted` orders candidates once by their initial netgain.
enum class TsetMode { strict, sorted };

enum class InitMode { random_balanced, threshold };

/// `indexed` answers row sums from the rank index in O(log n); `naive` scans
/// the side in O(n). Both produce the same decisions up to rounding.
enum class Acceleration { indexed, naive };

struct Targets {
  double p1 = 1.0;
  double p2 = 0.0;
};

struct SegConfig {
  double p1 = 1.0;
  double p2 = 0.0;
  NetgainMode netgain_mode = NetgainMode::exact;
  TsetMode tset_mode = TsetMode::sorted;
  InitMode init = InitMode::random_balanced;
  std::uint64_t init_seed = 0;
  std::size_t max_sweeps = 100;
  std::optional<std::size_t> patch_len;
  std::size_t stride = 2;
  double vote_threshold = 0.5;
  std::size_t median_window = 3;
  Acceleration accel = Acceleration::indexed;

  Targets targets() const noexcept { return {p1, p2}; }

  /// Checks the image-independent invariants.
  void validate() const {
    if (!std::isfinite(p1) || !std::isfinite(p2)) throw InvalidArgument("p1 and p2 must be finite");
    if (p1 == p2) throw InvalidArgument("p1 must differ from p2");
    if (max_sweeps == 0) throw InvalidArgument("max_sweeps must be positive");
    if (stride == 0) throw InvalidArgument("stride must be at least 1");
    if (!(vote_threshold > 0.0 && vote_threshold <= 1.0)) {
      throw InvalidArgument("vote_threshold must lie in (0, 1]");
    }
    if (median_window == 0 || median_window % 2 == 0) {
      throw InvalidArgument("median_window must be an odd positive integer");
    }
    if (patch_len && *patch_len == 0) throw InvalidArgument("patch_len must be positive");
  }

  void validate(std::size_t width, std::size_t height) const {
    validate();
    if (patch_len && *patch_len > std::min(width, height)) {
      throw InvalidArgument("patch_len " + std::to_string(*patch_len) + " exceeds image side " +
                            std::to_string(std::min(width, height)));
    }
  }
};

inline std::string_view to_string(NetgainMode m) { return m == NetgainMode::exact ? "exact" : "asymptotic"; }
inline std::string_view to_string(TsetMode m) { return m == TsetMode::strict ? "strict" : "sorted"; }
inline std::string_view to_string(InitMode m) { return m == InitMode::random_balanced ? "random" : "threshold"; }
inline std::string_view to_string(Acceleration a) { return a == Acceleration::indexed ? "indexed" : "naive"; }

inline NetgainMode parse_netgain_mode(std::string_view s) {
  if (s == "exact") return NetgainMode::exact;
  if (s == "asymptotic") return NetgainMode::asymptotic;
  throw InvalidArgument("unknown netgain mode '" + std::string(s) + "'");
}

inline TsetMode parse_tset_mode(std::string_view s) {
  if (s == "strict") return TsetMode::strict;
  if (s == "sorted") return TsetMode::sorted;
  throw InvalidArgument("unknown tset mode '" + std::string(s) + "'");
}

inline InitMode parse_init_mode(std::string_view s) {
  if (s == "random") return InitMode::random_balanced;
  if (s == "threshold") return InitMode::threshold;
  throw InvalidArgument("unknown init mode '" + std::string(s) + "'");
}

inline Acceleration parse_acceleration(std::string_view s) {
  if (s == "indexed") return Acceleration::indexed;
  if (s == "naive") return Acceleration::naive;
  throw InvalidArgument("unknown acceleration '" + std::string(s) + "'");
}

}  // namespace mdseg

#endif  // MDSEG_CONFIG_HPP
