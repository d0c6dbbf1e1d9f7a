#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace natded {

// Base of every exception thrown by the library. `code()` is a stable,
// machine-readable tag (used verbatim as the `error` field on the wire).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

enum class ParseFailure { MalformedToken, UnexpectedToken, UnboundVariable, ArityClash, BadIdentifier };

// Surface or constructor-form syntax error. `position` is a 0-based byte
// offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(ParseFailure failure, const std::string& message, std::size_t position)
      : Error("ParseError", message + " at position " + std::to_string(position)),
        failure_(failure),
        position_(position) {}

  ParseFailure failure() const noexcept { return failure_; }
  std::size_t position() const noexcept { return position_; }

 private:
  ParseFailure failure_;
  std::size_t position_;
};

}  // namespace natded
