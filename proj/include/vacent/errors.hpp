#pragma once

#include <stdexcept>
#include <string>

namespace vacent {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: non-convergence, residual too large, bad spectrum.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Result is not trustworthy at the working precision.
class PrecisionError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Eigenvalues too close to resolve a requested pairing or ground state.
class DegeneracyError : public NumericError {
public:
  DegeneracyError(const std::string& what, double gap) : NumericError(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

private:
  double gap_;
};

class SingularMatrixError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Input outside the mathematical domain (e.g. non-positive eigenvalue for a square root).
class DomainError : public Error {
public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
public:
  using Error::Error;
};

/// Invalid lattice or patch geometry.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Caller violated a precondition (wrong protocol, dimension mismatch).
class ContractError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace vacent
