#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msdarcy {

/// Argument outside the mathematical domain of an operation (e.g. rho <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operands whose shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid model, grid or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A check that valid inputs can never trip (singular solve, failed positivity).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A time integration stopped because the state left the admissible set.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, std::size_t cell, std::size_t species, double time)
      : std::runtime_error(what), cell_(cell), species_(species), time_(time) {}

  std::size_t cell() const noexcept { return cell_; }
  std::size_t species() const noexcept { return species_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t cell_;
  std::size_t species_;
  double time_;
};

}  // namespace msdarcy
