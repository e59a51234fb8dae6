#pragma once

#include <stdexcept>
#include <string>

namespace harvest {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit code (see tools/exit_codes.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature budget exhausted before the requested tolerance was met.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double value_estimate, double error_estimate)
      : Error(what), value_estimate_(value_estimate), error_estimate_(error_estimate) {}
  explicit NonConvergence(const std::string& what) : Error(what) {}
  double value_estimate() const { return value_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double value_estimate_ = 0.0;
  double error_estimate_ = 0.0;
};

// Integral that does not exist (pointlike detector with delta switching).
class UVDivergent : public NonConvergence {
 public:
  explicit UVDivergent(const std::string& what) : NonConvergence(what) {}
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class OrderingViolated : public Error {
 public:
  using Error::Error;
};

class ZeroProbability : public Error {
 public:
  using Error::Error;
};

class NotAState : public Error {
 public:
  using Error::Error;
};

// Output file could not be created or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace harvest
