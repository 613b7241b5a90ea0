#pragma once

#include <stdexcept>
#include <string>

namespace evdom {

/// Inputs violate a documented precondition (wrong grid, empty vector, bad range, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not be completed to the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolvent requested at (or numerically too close to) a spectral point.
class SingularResolventError : public NumericalError {
 public:
  SingularResolventError(const std::string& what, double nearest)
      : NumericalError(what), nearest_eigenvalue(nearest) {}
  double nearest_eigenvalue;
};

/// exp(tA) or a quadrature panel left the representable range.
class OverflowError : public NumericalError {
 public:
  OverflowError(const std::string& what, double norm)
      : NumericalError(what), offending_norm(norm) {}
  double offending_norm;
};

/// Eigenvalue cluster selection was ambiguous: another eigenvalue straddles the
/// cluster boundary, so the requested spectral projection is not well defined
/// at the given tolerance.
class AmbiguousClusterError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Mean-ergodic analysis rejected the spectrum: the zero cluster is defective
/// or further eigenvalues sit on the imaginary axis.
class NonErgodicError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace evdom
