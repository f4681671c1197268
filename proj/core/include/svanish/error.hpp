#pragma once

#include <stdexcept>
#include <string>

namespace svanish {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t <= 0, rho outside (0, 1/2), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a configured capacity (Bessel order above n_max, double factorial above 40).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Division by a (numerically) vanishing quantity.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, double magnitude)
      : Error(what + " (magnitude " + std::to_string(magnitude) + ")"), magnitude_(magnitude) {}

  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

/// Numerical failure inside an iterative or compositional solver.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Broken internal bookkeeping, e.g. a Laurent series shorter than the builder promised.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Sample point lies on a sphere where the material tensors are discontinuous.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Input document does not match its schema. `field()` names the offending entry.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& message)
      : Error("schema error at '" + field + "': " + message), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace svanish
