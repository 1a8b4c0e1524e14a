#pragma once

#include <stdexcept>
#include <string>

namespace codeaug {

/// Base for every error the library raises on bad input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A source diagnostic with a 1-based position.
class SourceError : public DataError {
 public:
  SourceError(int line, int col, const std::string& message)
      : DataError(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
        line_(line),
        col_(col),
        message_(message) {}

  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int col_;
  std::string message_;
};

class SyntaxError : public SourceError {
 public:
  using SourceError::SourceError;
};

/// Valid C/C++ that falls outside the supported subset.
class UnsupportedConstruct : public SourceError {
 public:
  using SourceError::SourceError;
};

class InapplicableSite : public DataError {
 public:
  using DataError::DataError;
};

class NoApplicableTransform : public DataError {
 public:
  using DataError::DataError;
};

class EmptySubset : public DataError {
 public:
  using DataError::DataError;
};

class UnknownTask : public DataError {
 public:
  using DataError::DataError;
};

class MissingScore : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateDenominator : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace codeaug
