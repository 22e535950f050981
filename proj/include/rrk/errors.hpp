#pragma once

#include <stdexcept>
#include <string>

namespace rrk {

// Exit-code classes shared by the library, the C interface and the CLI.
enum class ErrorKind {
  Usage = 2,         // bad arguments, malformed input files
  InvalidModel = 3,  // distribution / channel / factorization problems
  Incompatible = 4,  // comparing regions over different variable spaces
  Internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(ErrorKind::InvalidModel, what) {}
};

class IncompatibleError : public Error {
 public:
  explicit IncompatibleError(const std::string& what) : Error(ErrorKind::Incompatible, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

}  // namespace rrk
