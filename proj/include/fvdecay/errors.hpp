#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fvdecay {

struct InvalidMesh : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton failure. step is the time-step index when raised from simulate().
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, double residual, std::size_t step = 0)
      : std::runtime_error(what), residual(residual), step(step) {}
  double residual;
  std::size_t step;
};

}  // namespace fvdecay
