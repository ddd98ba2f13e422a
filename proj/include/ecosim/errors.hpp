#pragma once

#include <stdexcept>
#include <string>

namespace ecosim {

// Invalid domain value (empty description, out-of-range token, ...).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Unresolvable agent id.
class LookupError : public std::runtime_error {
public:
  explicit LookupError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration value; carries the offending key path.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

// Population cannot be seeded (empty agent pool).
class SeedingError : public std::runtime_error {
public:
  explicit SeedingError(const std::string& what) : std::runtime_error(what) {}
};

// Combinatorial guard of the exhaustive oracle violated.
class OracleGuardError : public std::runtime_error {
public:
  explicit OracleGuardError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ecosim
