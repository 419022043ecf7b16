#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gravphon {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where a formula is defined
/// (e.g. evaluating a chirp at or after coalescence).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: quadrature that did not converge, a state
/// whose trace underflowed, a broken density-matrix invariant.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, double last_estimate = 0.0)
      : Error(what), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a structural rule (non-uniform sampling,
/// empty file, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gravphon
