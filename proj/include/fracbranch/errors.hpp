#pragma once

#include <stdexcept>
#include <string>

namespace fracbranch {

// Domain errors (poles, non-convergent series, bad sampler arguments) are
// reported with std::domain_error. The two types below cover the remaining
// failure classes that callers need to tell apart.

/// A configured resource limit was exhausted (walk step cap, ...).
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration. `key()` names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace fracbranch
