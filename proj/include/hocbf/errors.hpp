#pragma once

#include <stdexcept>
#include <string>

namespace hocbf {

/// Precondition or argument violation (non-finite values, bad dimensions, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The safety constraint has a = 0 and c < 0: no input satisfies it. For a
/// chi-truncated chain this means the singular set is not contained in
/// {b >= xi}.
class InfeasibleAtState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-loop integration left the finite domain (state norm above the
/// divergence guard, or a non-finite value appeared).
class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hocbf
