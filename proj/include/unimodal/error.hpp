#pragma once

#include <stdexcept>
#include <string>

namespace unimodal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A shape parameter violates its family's bounds.
class ParameterBoundsError : public Error {
public:
  using Error::Error;
};

/// A caller-supplied argument is out of range (grid sizes, empty series, ...).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// The operation is only defined for a subset of families.
class UnsupportedFamilyError : public Error {
public:
  using Error::Error;
};

/// Parameter generation ran out of rejection attempts.
class GenerationError : public Error {
public:
  using Error::Error;
};

/// Malformed input text; line is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// File could not be read or written.
class IoError : public Error {
public:
  IoError(const std::string& what, std::string path) : Error(what + ": " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace unimodal
