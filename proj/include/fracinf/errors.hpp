#pragma once

#include <stdexcept>
#include <string>

namespace fracinf {

/// Argument outside the domain where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure stopped before reaching its tolerance. Carries the
/// best available estimate and an error bound for it.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double partial, double error_bound)
      : std::runtime_error(what), partial_(partial), error_bound_(error_bound) {}

  double partial() const noexcept { return partial_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double partial_;
  double error_bound_;
};

/// Standing structural assumptions on the coefficients are violated
/// (for instance alpha <= 2s or N <= 2s).
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A barrier construction could not certify its parameters.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An object was used before it was fully initialised.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A discrete invariant that must hold by construction was observed to fail.
class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The time step is too large for the positive part of the reaction term.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracinf
