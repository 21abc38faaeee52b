#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cnngp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Shapes of operands do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension_error"; }
};

/// A scalar or structural parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parameter_error"; }
};

/// Input data violates an ingestion invariant (duplicates, non-finite values, bad CSV).
class DataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "data_error"; }
};

/// Cholesky factorization hit a non-positive pivot. `pivot()` is 1-based.
class DecompositionError : public Error {
 public:
  DecompositionError(std::size_t pivot, const std::string& what)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }
  const char* kind() const noexcept override { return "decomposition_error"; }

 private:
  std::size_t pivot_;
};

/// Triangular system with a zero on the diagonal.
class SingularError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "singular_error"; }
};

/// An iterative solve did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "convergence_error"; }
};

}  // namespace cnngp
