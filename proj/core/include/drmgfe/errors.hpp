#pragma once

#include <stdexcept>
#include <string>

namespace drmgfe {

/// An iterative or direct linear solve did not reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value is missing, malformed, or inconsistent. key() names
/// the offending entry ("section.key") so front ends can report it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace drmgfe
