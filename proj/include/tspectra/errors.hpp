#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tspectra {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (symbols, CSV files, arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t position, const std::string& reason)
      : InputError("parse error at position " + std::to_string(position) + ": " + reason),
        position_(position),
        reason_(reason) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

class DuplicateOffset : public InputError {
 public:
  explicit DuplicateOffset(int offset)
      : InputError("duplicate symbol offset " + std::to_string(offset)), offset_(offset) {}
  int offset() const noexcept { return offset_; }

 private:
  int offset_;
};

class TargetTooSmall : public InputError {
 public:
  using InputError::InputError;
};

/// A computation could not produce a trustworthy result.
class NumericError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Raised by the QR iteration; the typed subclass in eigensolver.hpp carries
/// the partially converged spectrum.
class NoConvergence : public NumericError {
 public:
  NoConvergence(const std::string& what, std::size_t converged)
      : NumericError(what), converged_(converged) {}
  std::size_t converged() const noexcept { return converged_; }

 private:
  std::size_t converged_;
};

class NoBracket : public NumericError {
 public:
  using NumericError::NumericError;
};

class EigSourceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace tspectra
