#pragma once

#include <stdexcept>
#include <string>

namespace ghzsim {

// Base of every error raised by the library. Each subclass maps onto one
// error category used by the CLI exit-code contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// A precondition on physical configuration (resonance, tuning, step size).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// A Hamiltonian that violates a structural requirement, e.g. Hermiticity.
class ModelError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double drift) : Error(what), drift_(drift) {}
  double drift() const { return drift_; }

 private:
  double drift_;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double top_population)
      : Error(what), top_population_(top_population) {}
  double top_population() const { return top_population_; }

 private:
  double top_population_;
};

}  // namespace ghzsim
