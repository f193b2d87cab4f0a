#pragma once

#include <stdexcept>
#include <string>

namespace swimmer {

/// Invalid configuration value. `field()` holds the dotted path of the
/// offending field, e.g. "flagella[2].segment_length".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Integrator or linear-algebra failure (singular resistance matrix,
/// Newton non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swimmer
