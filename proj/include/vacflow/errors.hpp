#pragma once

#include <stdexcept>
#include <string>

namespace vacflow {

/// Argument outside the mathematical domain of a formula (negative density, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Time step exceeds the stability bound of the explicit convective update.
class CflViolation : public std::runtime_error {
 public:
  CflViolation(const std::string& what, double wave_speed, double dt_max)
      : std::runtime_error(what), wave_speed_(wave_speed), dt_max_(dt_max) {}
  double wave_speed() const { return wave_speed_; }
  double dt_max() const { return dt_max_; }

 private:
  double wave_speed_;
  double dt_max_;
};

/// Integrator, solver or fit failure; the numerical run cannot continue.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested configuration is outside what an operation supports (e.g. inflow
/// boundaries for the regularity check).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace vacflow
