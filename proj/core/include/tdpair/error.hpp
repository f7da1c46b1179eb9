#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdpair {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

// Sampling could not produce enough distinct field elements.
class FieldTooSmall : public Error {
 public:
  using Error::Error;
};

// Structurally malformed input (wrong lengths, bad JSON shape, ...), as
// opposed to well-formed input that fails a mathematical condition.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition on a specialization does not hold.
class InadmissibleContext : public Error {
 public:
  InadmissibleContext(std::string condition, const std::string& detail)
      : Error(condition + ": " + detail), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace tdpair
