#pragma once

#include <stdexcept>
#include <string>

namespace domstop {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or invocation (CLI exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Bad or inconsistent input data (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public UsageError {
 public:
  using UsageError::UsageError;
};

class IngestError : public DataError {
 public:
  using DataError::DataError;
};

/// Malformed input record; line() is 1-based, 0 when not line oriented.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : DataError(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LookupError : public DataError {
 public:
  using DataError::DataError;
};

class HashMismatchError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateError : public DataError {
 public:
  using DataError::DataError;
};

/// Training produced a non-finite loss or parameter.
class DivergenceError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace domstop
