#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radaug {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pixel index outside the image.
class AddressingError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or unrepresentable numeric input.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid transform parameters (bad pole, ray index, singular matrix, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

enum class DecodeErrorKind {
  kMissingFile,
  kMalformedHeader,
  kTruncatedData,
  kUnsupportedDepth,
  kUnsupportedFormat,
};

const char* to_string(DecodeErrorKind kind);

class DecodeError : public Error {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& detail)
      : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

  DecodeErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  DecodeErrorKind kind_;
  std::string detail_;
};

class WriteError : public Error {
 public:
  using Error::Error;
};

/// Dataset tree could not be loaded.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Malformed manifest or report line; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ExpansionError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent experiment setup, e.g. train and test class lists differ.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace radaug
