#pragma once

#include <stdexcept>
#include <string>

namespace dynlearn {

/// Algebraic subproblem has no usable solution (near-zero pivot/determinant).
struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative solver exhausted its iteration budget; carries the final residual.
struct ConvergenceError : std::runtime_error {
  double residual;
  ConvergenceError(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

/// Integrated state left the sane region; carries the blow-up time.
struct DivergenceError : std::runtime_error {
  double time;
  DivergenceError(const std::string& msg, double t)
      : std::runtime_error(msg), time(t) {}
};

/// Malformed or inconsistent configuration input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File could not be read, written, or parsed.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Artifact produced under a different upstream configuration.
struct HashMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training hit a non-finite loss; carries where it happened.
struct TrainingAbort : std::runtime_error {
  int epoch;
  int batch;
  TrainingAbort(const std::string& msg, int e, int b)
      : std::runtime_error(msg), epoch(e), batch(b) {}
};

}  // namespace dynlearn
