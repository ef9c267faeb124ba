#pragma once

#include <stdexcept>
#include <string>

namespace coopjam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatches, out-of-range indices, malformed problems.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An iterative method stopped before meeting its tolerance. Carries the
/// best estimate reached so callers can decide whether it is usable.
class AccuracyNotReached : public Error {
 public:
  AccuracyNotReached(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Coinciding jammer powers or coinciding partial-fraction poles.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Combinatorial size exceeds the configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace coopjam
