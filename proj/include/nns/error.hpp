#pragma once

#include <stdexcept>
#include <string>

namespace nns {

/// Bad caller input: a violated precondition or an unsupported parameter.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structural property that must hold on every instance did not.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nns

namespace nns {

/// Invalid experiment configuration; names the offending field.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string field, const std::string& message)
      : ValidationError(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace nns
