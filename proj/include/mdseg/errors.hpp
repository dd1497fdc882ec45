#ifndef MDSEG_ERRORS_HPP
#define MDSEG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdseg {

// Every error carries a short machine-readable kind, used by the CLI when it
// reports failures as `error: <kind>: <message>`.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

/// A transfer (or a partition) would leave one side without pixels.
class EmptySideError : public Error {
 public:
  explicit EmptySideError(const std::string& what = "last pixel on side")
      : Error("empty_side", what) {}
};

class NonConvergenceError : public Error {
 public:
  explicit NonConvergenceError(const std::string& what) : Error("non_convergence", what) {}
};

/// Failure inside one patch of a patch-wise segmentation.
class PatchError : public Error {
 public:
  PatchError(std::size_t top, std::size_t left, const std::string& what)
      : Error("patch_failure", "window (" + std::to_string(top) + ", " + std::to_string(left) +
                                   "): " + what),
        top_(top),
        left_(left) {}

  std::size_t top() const noexcept { return top_; }
  std::size_t left() const noexcept { return left_; }

 private:
  std::size_t top_;
  std::size_t left_;
};

class MalformedHeader : public Error {
 public:
  explicit MalformedHeader(const std::string& what) : Error("malformed_header", what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension_mismatch", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

}  // namespace mdseg

#endif  // MDSEG_ERRORS_HPP
