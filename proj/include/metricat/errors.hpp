#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace metricat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search or construction would exceed its configured point or node budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Two morphisms expected to be parallel (or composable) are not.
class MismatchedEndpoints : public Error {
 public:
  using Error::Error;
};

/// A point-index function is out of range or fails to be non-expansive.
class InvalidMorphism : public Error {
 public:
  using Error::Error;
};

/// A product would have more points than the configured budget allows.
class SizeOverflow : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input. `pointer()` is a JSON pointer to the offending node.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace metricat
