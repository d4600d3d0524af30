#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace edkg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class ErrorKind {
  InvalidArgument,
  DegenerateMass,
  EvaluationFailure,
  AsymmetricGrid,
  NonHermitianMetric,
  SingularMetric,
  DegenerateSpectrum,
  PairingFailure,
  ComplexSpectrum,
  BranchLost,
  ComplexBranch,
  RefinementStall,
  IllConditionedOverlap,
  DimensionMismatch,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Frobenius norm is used for every tolerance scale in the library.
template <typename Derived>
double norm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

template <typename Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).norm();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double rel_tol) {
  return hermiticity_residual(m) <= rel_tol * std::max(1.0, m.norm());
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace edkg
