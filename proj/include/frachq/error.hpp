#pragma once

#include <stdexcept>
#include <string>

namespace frachq {

// Numeric values are mirrored by frachq_status in frachq.h.
enum class ErrorCode : int {
  domain = 1,
  quadrature_failure = 2,
  divergence_risk = 3,
  dimension_mismatch = 4,
  not_hermitian = 5,
  invalid_density = 6,
  unsupported_mode = 7,
  branch_cut = 8,
  eigensolver = 9,
  point_mass = 10,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Adaptive quadrature ran out of its interval budget.
/// Carries the error estimate reached at the point of giving up.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double achieved_error)
      : Error(ErrorCode::quadrature_failure, what),
        achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain error";
    case ErrorCode::quadrature_failure: return "quadrature failure";
    case ErrorCode::divergence_risk: return "divergence risk";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::not_hermitian: return "matrix is not Hermitian";
    case ErrorCode::invalid_density: return "invalid density matrix";
    case ErrorCode::unsupported_mode: return "unsupported mode";
    case ErrorCode::branch_cut: return "argument on branch cut";
    case ErrorCode::eigensolver: return "eigensolver failure";
    case ErrorCode::point_mass: return "kernel collapsed to a point mass";
  }
  return "unknown error";
}

}  // namespace frachq
