#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace nlhf {

// Exit-code families used by the CLI: config=1, convergence=2, numerical=3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : ConfigError {
  using ConfigError::ConfigError;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, std::vector<double> trace = {})
      : std::runtime_error(what), energy_trace(std::move(trace)) {}
  std::vector<double> energy_trace;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A channel lacks the bound state an occupied shell needs.
struct SpectrumError : NumericalError {
  using NumericalError::NumericalError;
};

// Raw eigenvector tails were used where the log-exact tail is required.
struct PrecisionError : NumericalError {
  using NumericalError::NumericalError;
};

// Probe energy too close to the discrete spectrum.
struct ConditioningError : NumericalError {
  ConditioningError(const std::string& what, double nearest)
      : NumericalError(what), nearest_eigenvalue(nearest) {}
  double nearest_eigenvalue;
};

}  // namespace nlhf
