#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stcut {

/// Bad input to a public operation (wrong size, out-of-range time, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The overlapping mesh left the interior of the background domain.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for failures that happen while assembling or solving.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AssemblyError : public NumericalError {
 public:
  AssemblyError(std::size_t slab, const std::string& what);
  std::size_t slab() const noexcept { return slab_; }

 private:
  std::size_t slab_;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(std::size_t slab, double rcond, const std::string& what);
  std::size_t slab() const noexcept { return slab_; }
  /// Reciprocal condition estimate in the infinity norm (0 when unavailable).
  double rcond() const noexcept { return rcond_; }

 private:
  std::size_t slab_;
  double rcond_;
};

}  // namespace stcut
