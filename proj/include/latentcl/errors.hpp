#pragma once

#include <stdexcept>

namespace latentcl {

/// A factorization or iteration could not deliver a trustworthy result
/// (rank deficiency, non-convergence, failed cross-check).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid problem or run configuration, detected before any computation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested problem lies outside the model's regime (n < d or p < n).
class PremiseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Reading or writing an input or output artifact failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latentcl
