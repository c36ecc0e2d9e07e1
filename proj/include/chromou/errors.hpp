#pragma once

#include <stdexcept>
#include <string>

namespace chromou {

/// Invalid construction parameter (shape kind, radius, alpha, tau, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unreadable caller-supplied input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lab colour with no exact 8-bit sRGB counterpart.
class GamutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampler ran out of attempts.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corrupt registry or template configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scene placement could not be satisfied within the retry budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Packing left no element on the figure side.
class DegenerateSceneError : public GenerationError {
 public:
  using GenerationError::GenerationError;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plan is invalid or too many cells failed.
class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chromou
