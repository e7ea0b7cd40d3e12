#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lmrecog {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rendered as `file:line:col: message`.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::size_t column, std::string message)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        file_(std::move(file)),
        line_(line),
        column_(column),
        message_(std::move(message)) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class UnsupportedFeatureError : public ParseError {
 public:
  using ParseError::ParseError;
};

class GroundingError : public Error {
 public:
  using Error::Error;
};

class InapplicableActionError : public Error {
 public:
  using Error::Error;
};

class UnsolvableInstanceError : public Error {
 public:
  using Error::Error;
};

class StateSpaceTooLargeError : public Error {
 public:
  using Error::Error;
};

class BundleError : public Error {
 public:
  using Error::Error;
};

}  // namespace lmrecog
