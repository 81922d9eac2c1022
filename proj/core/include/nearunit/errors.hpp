#pragma once

#include <stdexcept>
#include <string>

namespace nearunit {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid eigenvalue specification: ordering, distinctness, conjugate closure.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

// A factorization failed or a conditioning cap was exceeded.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling ran out of attempts.
class SamplingError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A statistic was requested outside the branch it is defined for.
class BranchError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied configuration (schedules, noise laws, experiment settings).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nearunit
