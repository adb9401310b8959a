#pragma once

#include <stdexcept>
#include <string>

namespace ionphase {

/// Malformed or missing configuration input (file, key, or value).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A structural or plan constraint is violated; the message names the
/// offending node or quantity.
struct ConstraintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The chain is wired for a different operation than the one requested
/// (wrong switch positions, missing waveform program).
struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation of a valid graph produced no usable signal (e.g. a passband
/// filtered away every mixer product).
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least-squares fit could not be performed (degenerate design, no data).
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ionphase
