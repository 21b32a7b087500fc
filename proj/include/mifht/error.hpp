#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mifht {

/// Failure categories raised by the library. Each maps onto one CLI exit code.
enum class ErrorKind {
  schema,             ///< malformed problem file
  overlap,            ///< intervals overlap, touch, or are reversed
  non_finite,         ///< NaN or infinite endpoint
  domain,             ///< point outside the admissible set of an operation
  index,              ///< interval index out of range
  endpoint,           ///< evaluation exactly at an interval endpoint
  degenerate_diagonal,
  zero_lambda,
  symmetry,
  range,              ///< data fails a range condition
  singular_data,      ///< endpoint-weighted moment does not converge
  near_singular,      ///< discretized operator numerically singular
  coincidence,        ///< resolvent kernel requested on its diagonal
  convergence,
  non_positive_eigenvalue,
  range_exceeded,     ///< inverse-map request beyond the tabulated t-range
};

[[nodiscard]] constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::schema: return "SchemaError";
    case ErrorKind::overlap: return "OverlapError";
    case ErrorKind::non_finite: return "NonFiniteError";
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::index: return "IndexError";
    case ErrorKind::endpoint: return "EndpointError";
    case ErrorKind::degenerate_diagonal: return "DegenerateDiagonalError";
    case ErrorKind::zero_lambda: return "ZeroLambdaError";
    case ErrorKind::symmetry: return "SymmetryError";
    case ErrorKind::range: return "RangeError";
    case ErrorKind::singular_data: return "SingularDataError";
    case ErrorKind::near_singular: return "NearSingularError";
    case ErrorKind::coincidence: return "CoincidenceError";
    case ErrorKind::convergence: return "ConvergenceError";
    case ErrorKind::non_positive_eigenvalue: return "NonPositiveEigenvalueError";
    case ErrorKind::range_exceeded: return "RangeExceededError";
  }
  return "Error";
}

/// Process exit code for a failure kind: 2 schema, 3 geometry, 4 degenerate
/// theta, 5 range violation, 6 near-singular, 7 convergence.
[[nodiscard]] constexpr int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::schema:
      return 2;
    case ErrorKind::overlap:
    case ErrorKind::non_finite:
    case ErrorKind::domain:
    case ErrorKind::index:
    case ErrorKind::endpoint:
    case ErrorKind::coincidence:
    case ErrorKind::zero_lambda:
    case ErrorKind::symmetry:
      return 3;
    case ErrorKind::degenerate_diagonal:
      return 4;
    case ErrorKind::range:
    case ErrorKind::range_exceeded:
      return 5;
    case ErrorKind::near_singular:
      return 6;
    case ErrorKind::singular_data:
    case ErrorKind::convergence:
    case ErrorKind::non_positive_eigenvalue:
      return 7;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mifht
