#pragma once

#include <stdexcept>
#include <string>

namespace gapline {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spectrum geometry
class GapGeometryError : public Error {
 public:
  using Error::Error;
};
class VanishingGapError : public GapGeometryError {
 public:
  using GapGeometryError::GapGeometryError;
};
class SpectrumViolationError : public Error {
 public:
  using Error::Error;
};

// Matrix construction / decomposition
class DimensionError : public Error {
 public:
  using Error::Error;
};
class ConvergenceError : public Error {
 public:
  using Error::Error;
};
class GapViolationError : public Error {
 public:
  using Error::Error;
};

// Bound evaluation
class DomainError : public Error {
 public:
  using Error::Error;
};
class ParameterError : public Error {
 public:
  using Error::Error;
};
class ThresholdNotReachedError : public Error {
 public:
  using Error::Error;
};

// Numerical integration
class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace gapline
