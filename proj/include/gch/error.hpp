#pragma once

#include <stdexcept>

namespace gch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field, matrix or feature-map shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A site or spectral index lies outside its valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this operator (e.g. the
/// closed-form spectral path on a weighted grid).
class UnsupportedOperatorError : public Error {
 public:
  using Error::Error;
};

/// A matrix failed symmetric positive-definite validation or factorization.
class NonSpdError : public Error {
 public:
  using Error::Error;
};

/// Input values lie outside the mathematical domain (e.g. log of zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateVarianceError : public Error {
 public:
  using Error::Error;
};

class CoherenceUndefinedError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary field file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gch
