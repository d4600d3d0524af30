#include "edkg/physical_basis.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace edkg {
namespace {

double range_min_eigenvalue(const Matrix& m, Eigen::Index rank) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();  // ascending
  return ev(ev.size() - rank);
}

}  // namespace

PhysicalBasis build_basis(const std::vector<PhysicalLevel>& levels, double max_condition) {
  if (levels.empty()) throw Error(ErrorKind::InvalidArgument, "physical basis needs a level");
  const Eigen::Index dim = levels.front().right_ket.size();
  const auto count = static_cast<Eigen::Index>(levels.size());
  if (count > dim) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("{} levels exceed the ambient dimension {}", count, dim));
  }

  PhysicalBasis b;
  b.levels = levels;
  b.energies.resize(count);
  b.kets.resize(dim, count);
  b.lefts.resize(dim, count);
  for (Eigen::Index a = 0; a < count; ++a) {
    const auto& lv = levels[static_cast<std::size_t>(a)];
    if (lv.right_ket.size() != dim || lv.left_bra.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "levels have inconsistent dimensions");
    }
    b.energies(a) = lv.energy;
    b.kets.col(a) = lv.right_ket;
    b.lefts.col(a) = lv.left_bra;
  }

  b.R = b.lefts.adjoint() * b.kets;
  const Eigen::JacobiSVD<Matrix> svd(b.R);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  b.condition_R = smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
  if (!(b.condition_R <= max_condition)) {
    throw Error(ErrorKind::IllConditionedOverlap,
                fmt::format("condition(R) = {:.3e} exceeds {:.1e}", b.condition_R, max_condition));
  }
  b.R_inv = Eigen::CompleteOrthogonalDecomposition<Matrix>(b.R).solve(
      Matrix::Identity(count, count));

  b.double_kets = b.kets * b.R_inv;
  b.double_bras = b.lefts * b.R_inv.adjoint();
  return b;
}

Matrix unit_projector(const PhysicalBasis& basis) {
  return basis.double_kets * basis.lefts.adjoint();
}

double projector_residual(const PhysicalBasis& basis) {
  const Matrix P = unit_projector(basis);
  if (basis.size() == basis.dimension()) {
    return (P - Matrix::Identity(P.rows(), P.cols())).norm();
  }
  return std::max((P * P - P).norm(), (P * basis.kets - basis.kets).norm());
}

Matrix build_K(const PhysicalBasis& basis) {
  return basis.kets * basis.energies.cast<Complex>().asDiagonal() * basis.double_bras.adjoint();
}

Matrix build_L(const PhysicalBasis& basis) {
  return basis.double_kets * basis.energies.cast<Complex>().asDiagonal() * basis.lefts.adjoint();
}

MetricSuite build_metrics(const PhysicalBasis& basis, const Matrix& K, const Matrix& L) {
  MetricSuite m;
  m.mu = basis.double_bras * basis.double_bras.adjoint();
  m.mu_inv = basis.kets * basis.kets.adjoint();
  m.nu = basis.lefts * basis.lefts.adjoint();
  m.nu_inv = basis.double_kets * basis.double_kets.adjoint();
  m.residual_K = (K.adjoint() * m.mu - m.mu * K).norm();
  m.residual_L = (m.nu * L - L.adjoint() * m.nu).norm();
  m.min_eig_mu = range_min_eigenvalue(m.mu, basis.size());
  m.min_eig_nu = range_min_eigenvalue(m.nu, basis.size());
  return m;
}

Matrix build_charge(const Matrix& eta_plus, const Matrix& parity) {
  if (eta_plus.rows() != parity.rows() || eta_plus.cols() != parity.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "metric and parity dimensions differ");
  }
  const Eigen::Index n = parity.rows();
  if ((parity * parity - Matrix::Identity(n, n)).norm() > 1e-12 * std::max(1.0, parity.norm())) {
    throw Error(ErrorKind::InvalidArgument, "parity is not an involution");
  }
  return eta_plus * parity;
}

double charge_involution_residual(const Matrix& C) {
  return (C * C - Matrix::Identity(C.rows(), C.cols())).norm();
}

}  // namespace edkg
