#pragma once

#include <stdexcept>
#include <string>

namespace frtsim {

/// Non-finite or out-of-domain argument passed to a model function.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Wind speed at or below the turbine cut-off guard.
class CutOffError : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// Parameter set violates a type invariant. `key()` names the offending field.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Network reduction produced a singular nodal admittance.
class TopologyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A state derivative or recorded quantity left the admissible range.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(double t, const std::string& what)
      : std::runtime_error(what), time_(t) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

}  // namespace frtsim
