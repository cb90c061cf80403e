#pragma once

#include <stdexcept>
#include <string>

namespace bitreset {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (maps to CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical machinery failed to meet its tolerance (maps to CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepTooLarge : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoBracket : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// p has support where q has none.
class InfiniteDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A fixed-error design target cannot be reached (maps to CLI exit code 4).
class InfeasibleTarget : public Error {
 public:
  enum class Kind { below_floor, above_zero_jump };

  InfeasibleTarget(Kind kind, double target, double floor, double min_time, const std::string& what)
      : Error(what), kind_(kind), target_(target), floor_(floor), min_time_(min_time) {}

  Kind kind() const noexcept { return kind_; }
  double target() const noexcept { return target_; }
  /// Reset error reached as the drive goes to infinity, e^{-mu tau}/2.
  double floor() const noexcept { return floor_; }
  /// Minimal reset time for the requested target.
  double min_time() const noexcept { return min_time_; }

 private:
  Kind kind_;
  double target_;
  double floor_;
  double min_time_;
};

}  // namespace bitreset
