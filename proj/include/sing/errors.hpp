#pragma once

#include <stdexcept>
#include <string>

namespace sing {

// Caller violated a precondition (bad index, mismatched partition, range).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration is well-formed text but describes an invalid setup.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Non-finite value or division by zero encountered during evaluation.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, std::string location = {})
      : std::runtime_error(location.empty() ? what : what + " [" + location + "]"),
        location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace sing
