#pragma once

#include <stdexcept>
#include <string>

namespace sasha {

/// Invalid user-supplied configuration (bad field value, unknown key, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated on-disk data (bag files, checkpoints, manifests).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tensor shape mismatch between an operation and its inputs.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values encountered during training or optimization.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation invoked on a component in the wrong state (e.g. unloaded checkpoint).
struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A required upstream artifact (checkpoint, dataset) is missing or incompatible.
struct DependencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every action in a discrete action space is masked out.
struct ExhaustedActionsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An already-visited patch was selected again.
struct RepeatActionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sasha
