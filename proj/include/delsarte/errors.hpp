#pragma once

#include <stdexcept>
#include <string>

namespace delsarte {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition (admissibility of a polynomial, sign pattern,
/// ...) does not hold. `index()` names the first failing position, or -1.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, long index = -1)
      : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds a configured computational limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace delsarte
