#pragma once

#include <stdexcept>
#include <string>

namespace qnls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is non-finite, out of range, or otherwise unusable.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Array lengths do not match the grid they are paired with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An object is in the wrong state for the requested operation
/// (unconverged ground state, empty trajectory, ...).
class StateError : public Error {
 public:
  using Error::Error;
};

/// File-system failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration problems. `kind` distinguishes parse, range and
/// missing-file failures so the CLI can report them separately.
class ConfigError : public Error {
 public:
  enum class Kind { Parse, Range, MissingFile, UnknownChoice };

  ConfigError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Throws InvalidParameter(what) unless cond holds.
void require(bool cond, const std::string& what);

}  // namespace qnls
