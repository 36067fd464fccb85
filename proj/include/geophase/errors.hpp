#pragma once

#include <stdexcept>
#include <string>

namespace geophase {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Drive parameters or call arguments outside their admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function (e.g. an angle).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Coincident normal-mode frequencies (Omega == 0); the closed form is singular.
class DegenerateMode : public Error {
 public:
  using Error::Error;
};

/// Integrator step violates the resolution guard.
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// Integration would need more steps than the configured budget.
class StepBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Relative phase requested for a state with a vanishing amplitude.
class UndefinedPhase : public Error {
 public:
  using Error::Error;
};

}  // namespace geophase
