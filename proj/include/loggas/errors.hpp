#pragma once

#include <stdexcept>
#include <string>

namespace loggas {

/// Invalid argument or violated precondition (bad range, wrong size, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two particles share a position, so the log interaction diverges.
class DegenerateConfiguration : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), residual_(last_residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The equilibrium grid does not contain the support of the measure.
class BracketError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace loggas
