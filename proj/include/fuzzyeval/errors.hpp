#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyeval {

/// Caller passed a value outside an operation's domain (e.g. a hedge input
/// outside [0,1], alpha = 0, mismatched sampled-set domains).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rubric, rule base or profile is structurally invalid. `path` is a JSON
/// pointer into the offending config document when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::string path = {})
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Inference could not produce a crisp value: no rule fired, or the aggregate is empty.
class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem or archive failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fuzzyeval
