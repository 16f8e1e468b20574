#pragma once

#include <stdexcept>
#include <string>

namespace l96sp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or parsed (CLI exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

/// A state left the finite/bounded region. `time()` is in MTU from the
/// start of the run that detected it (CLI exit code 3).
class BlowUpError : public Error {
 public:
  BlowUpError(double time, const std::string& what);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Any other numerical failure (singular fits, diverging training).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace l96sp
