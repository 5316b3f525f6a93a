#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coassoc {

/// Failure categories surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidInput,
  DuplicateSimplex,
  RepeatedVertexInSimplex,
  OutOfRange,
  NotPseudomanifold,
  NonOrientable,
  CompactComponent,
  DegenerateTetrahedron,
  ParseError,
  ExactnessViolation,
  MismatchWithDirect,
  NotACocycle,
  DegenerateForm,
  SolverNonConvergence,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DuplicateSimplex: return "DuplicateSimplex";
    case ErrorKind::RepeatedVertexInSimplex: return "RepeatedVertexInSimplex";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotPseudomanifold: return "NotPseudomanifold";
    case ErrorKind::NonOrientable: return "NonOrientable";
    case ErrorKind::CompactComponent: return "CompactComponent";
    case ErrorKind::DegenerateTetrahedron: return "DegenerateTetrahedron";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ExactnessViolation: return "ExactnessViolation";
    case ErrorKind::MismatchWithDirect: return "MismatchWithDirect";
    case ErrorKind::NotACocycle: return "NotACocycle";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::SolverNonConvergence: return "SolverNonConvergence";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by iterative eigensolvers; carries the best residual reached.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double achieved_residual)
      : Error(ErrorKind::SolverNonConvergence, what), residual_(achieved_residual) {}

  double achieved_residual() const noexcept { return residual_; }

 private:
  double residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace coassoc
