#pragma once

#include <stdexcept>
#include <string>

namespace hdmax {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Invalid run parameter (sample size, grid shape, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A quadrature or iteration did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string &what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

private:
  double achieved_error_;
};

} // namespace hdmax
