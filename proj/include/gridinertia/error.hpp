#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridinertia {

// Input-side failures map to CLI exit code 2, computational ones to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::string field = {}, std::size_t line = 0)
      : InputError(format(message, field, line)), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& message, const std::string& field, std::size_t line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  std::string field_;
  std::size_t line_;
};

class ReferenceError : public InputError {
 public:
  using InputError::InputError;
};

class InvariantError : public InputError {
 public:
  using InputError::InputError;
};

class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridinertia
