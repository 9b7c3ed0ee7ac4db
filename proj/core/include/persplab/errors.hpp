#pragma once

#include <stdexcept>
#include <string>

namespace persplab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParam : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class DegenerateStack : public Error {
 public:
  using Error::Error;
};

class NoObservations : public Error {
 public:
  using Error::Error;
};

// LP outcomes that do not yield a primal solution.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

class IterationLimit : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace persplab
