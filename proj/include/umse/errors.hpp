#pragma once

#include <stdexcept>
#include <string>

namespace umse {

// Base for every error raised by the library. `kind()` is a short stable token
// that the CLI prints on its one-line error report.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Grids that must be aligned pixel-for-pixel have different dimensions.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message) : Error("shape", message) {}
};

// A precondition on a scalar argument or configuration value failed.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

// Input data is well-formed but statistically degenerate (zero variance etc).
class DegenerateData : public Error {
 public:
  explicit DegenerateData(const std::string& message) : Error("degenerate", message) {}
};

// Malformed, truncated, or unsupported file contents.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message) : Error("format", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace umse
