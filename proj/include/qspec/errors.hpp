#pragma once

#include <stdexcept>
#include <string>

namespace qspec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroDivision : public Error {
 public:
  using Error::Error;
};

class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

class Singular : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class Divergent : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class QuadratureDivergence : public Error {
 public:
  using Error::Error;
};

class NonRealCoefficients : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class RadiusTooSmall : public Error {
 public:
  using Error::Error;
};

// Contour construction and selection failures.
class ContourLeak : public Error {
 public:
  using Error::Error;
};

class ClearanceTooLarge : public Error {
 public:
  using Error::Error;
};

class SphereSplit : public Error {
 public:
  using Error::Error;
};

/// An error that carries the numerical witness that triggered it: the
/// smallest singular value (or modulus) that fell under the threshold.
class MarginError : public Error {
 public:
  MarginError(const std::string& what, double margin)
      : Error(what), margin_(margin) {}

  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// q lies on the sphere s0 + s1*S where the scalar kernel is not defined.
class OnZeroLocus : public MarginError {
 public:
  using MarginError::MarginError;
};

/// T^2 - 2 Re[s] T + |s|^2 I is numerically singular.
class OnSSpectrum : public MarginError {
 public:
  using MarginError::MarginError;
};

/// sI - T is numerically singular.
class OnLSpectrum : public MarginError {
 public:
  using MarginError::MarginError;
};

}  // namespace qspec
