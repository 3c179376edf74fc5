#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msbench {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad ratios, mismatched lengths, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input data is malformed or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

// A quantity is undefined for the given input (e.g. entropy of an all-zero spectrum).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Text input could not be parsed. `line` is 1-based, 0 when not line-oriented;
// `column` is a 0-based character offset.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : DataError(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace msbench
