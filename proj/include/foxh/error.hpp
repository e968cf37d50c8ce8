#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace foxh {

using Complex = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or parameter invariant does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or numerically on top of) a pole of a gamma factor.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its term, level or subdivision cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed DSL or configuration input. Carries a 1-based source position
/// when one is known (line = 0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace foxh
