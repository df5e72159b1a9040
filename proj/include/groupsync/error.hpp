#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace groupsync {

/// Bad argument value (out-of-range size, non-positive duration, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector/matrix dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but the requested quantity is undefined for it
/// (zero variance, zero mean, flat spectrum, all-gap signal).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Experiment or trial configuration violates an invariant. `field()` names
/// the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace groupsync
