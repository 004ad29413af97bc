#pragma once

#include <stdexcept>
#include <string>

namespace corred {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// A matrix failed DensityMatrix validation (trace, hermiticity or positivity).
class InvalidState : public Error {
 public:
  using Error::Error;
};

class NotNonnegative : public Error {
 public:
  using Error::Error;
};

class ZeroTrace : public Error {
 public:
  using Error::Error;
};

class NonPositiveTemperature : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Sp(rho * sigma') vanished: the conditioning state is orthogonal to the
/// support of rho.
class DegenerateOverlap : public Error {
 public:
  using Error::Error;
};

class ZeroNeumannMean : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

/// A piecewise formula was evaluated exactly on its branch boundary.
class TieUndefined : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace corred
