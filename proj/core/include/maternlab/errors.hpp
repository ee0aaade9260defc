#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace maternlab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Series, quadrature or iteration did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Root bracketing failed (practical range, scale calibration).
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Kernel parameters violate a membership condition in the requested dimension.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "kernel validation failed";
    for (const auto& s : v) out += "; " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Concentrated likelihood undefined because the data vector is identically zero.
class FlatData : public Error {
 public:
  using Error::Error;
};

class NoFreeParameters : public Error {
 public:
  using Error::Error;
};

class AllStartsFailed : public Error {
 public:
  using Error::Error;
};

class UnsupportedPair : public Error {
 public:
  using Error::Error;
};

class DimensionOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Polynomial block of a conditionally positive definite system is rank deficient.
class DegenerateDesign : public Error {
 public:
  using Error::Error;
};

class EmptyNearSet : public Error {
 public:
  using Error::Error;
};

}  // namespace maternlab
