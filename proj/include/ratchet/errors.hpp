#pragma once

#include <stdexcept>
#include <string>

namespace ratchet {

/// Bad user configuration: unknown key, missing key, or a violated invariant.
/// `key()` names the offending configuration key (may be empty).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A run left its numerically trustworthy regime (norm drift, basis truncation).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ratchet
