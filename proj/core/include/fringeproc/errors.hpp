#pragma once

#include <stdexcept>
#include <string>

namespace fringe {

// Every failure raised by the library derives from Error, so callers can
// catch broadly and still branch on the concrete class when they need to
// (the CLI maps classes onto exit codes).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two operands disagree in dimensions, or an image is not divisible as the
// network requires.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class FormatErrc {
  bad_magic,
  version_mismatch,
  truncated,
  non_finite,
  shape_audit,
  config_mismatch,
  malformed,
};

const char* to_string(FormatErrc code) noexcept;

// Malformed FPAI/FPAW files and manifests.
class FormatError : public Error {
 public:
  FormatError(FormatErrc code, const std::string& detail)
      : Error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  FormatErrc code() const noexcept { return code_; }

 private:
  FormatErrc code_;
};

// A numerical stage could not produce a result (e.g. too little valid
// orientation coverage to unwrap).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fringe
