#pragma once

#include <stdexcept>
#include <string>

namespace hardylab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Evaluation at (or numerically at) a singular point.
struct PoleError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

// Profile violates a boundary condition required by a transform.
struct InvalidProfileError : Error {
  using Error::Error;
};

// Rayleigh quotient with vanishing denominator.
struct UndefinedQuotientError : Error {
  using Error::Error;
};

// Function type not admissible for a functional kind.
struct AdmissibilityError : Error {
  using Error::Error;
};

// Singular integrand near the pole without a declared local exponent.
struct MissingExponentError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace hardylab
