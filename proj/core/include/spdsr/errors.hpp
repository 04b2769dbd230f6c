#ifndef SPDSR_ERRORS_HPP_
#define SPDSR_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace spdsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite entries, wrong dimensions, non-rotations.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Mathematically undefined request, e.g. the logarithm of a non-SPD matrix.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The eigen-decomposition fiber is infinite because of repeated eigenvalues.
/// Carries the eigenvalue partition (0-based indices) that caused it.
class MultiplicityError : public Error {
 public:
  MultiplicityError(const std::string& what, std::vector<std::vector<int>> blocks)
      : Error(what), blocks_(std::move(blocks)) {}

  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }

 private:
  std::vector<std::vector<int>> blocks_;
};

/// An iterative maximization ran out of iterations.  The last iterate is kept.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double theta, double phi, double value)
      : Error(what), theta_(theta), phi_(phi), value_(value) {}

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  double value() const noexcept { return value_; }

 private:
  double theta_;
  double phi_;
  double value_;
};

/// The principal axis of a tensor is not unique (top eigenvalue repeated).
class AmbiguousAxis : public Error {
 public:
  using Error::Error;
};

}  // namespace spdsr

#endif  // SPDSR_ERRORS_HPP_
