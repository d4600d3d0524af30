#pragma once

#include <optional>
#include <vector>

#include "edkg/fixedpoint.hpp"

namespace edkg {

/// Physical levels gathered from different fixed-point energies, with the
/// overlap matrix R_ab = <phi_a|phi^b> and the R^{-1}-dressed dual vectors.
///
/// Column conventions: `kets` holds |phi^a>, `lefts` holds |phi_a> (bras are
/// their adjoints), `double_kets` holds |phi^b>> = sum_a |phi^a> (R^{-1})_ab,
/// `double_bras` holds the adjoints of <<phi_a| = sum_b (R^{-1})_ab <phi_b|,
/// i.e. the dressed left vectors |phi_a>>.
struct PhysicalBasis {
  std::vector<PhysicalLevel> levels;
  RealVector energies;
  Matrix kets;
  Matrix lefts;
  Matrix R;
  Matrix R_inv;
  double condition_R = 1.0;
  Matrix double_kets;
  Matrix double_bras;

  Eigen::Index size() const { return energies.size(); }
  Eigen::Index dimension() const { return kets.rows(); }
};

inline constexpr double kMaxOverlapCondition = 1e10;

PhysicalBasis build_basis(const std::vector<PhysicalLevel>& levels,
                          double max_condition = kMaxOverlapCondition);

/// sum_b |phi^b>> <phi_b|, the (oblique) projector onto span{|phi^a>}.
Matrix unit_projector(const PhysicalBasis& basis);

/// max(||P^2 - P||, ||P Phi - Phi||), or ||P - I|| when the basis is complete.
double projector_residual(const PhysicalBasis& basis);

/// K = sum_a |phi^a> E_a <<phi_a|, acting like H(E_a) to the right.
Matrix build_K(const PhysicalBasis& basis);

/// L = sum_b |phi^b>> E_b <phi_b|, acting like H(E_b) to the left.
Matrix build_L(const PhysicalBasis& basis);

struct MetricSuite {
  Matrix mu;      ///< sum |phi_a>> <<phi_a|
  Matrix mu_inv;  ///< sum |phi^a> <phi^a|
  Matrix nu;      ///< sum |phi_a> <phi_a|
  Matrix nu_inv;  ///< sum |phi^a>> <<phi^a|
  std::optional<Matrix> eta_plus;
  std::optional<Matrix> charge_C;
  double residual_K = 0.0;  ///< || K^dagger mu - mu K ||
  double residual_L = 0.0;  ///< || nu L - L^dagger nu ||
  double min_eig_mu = 0.0;  ///< smallest eigenvalue on the |A|-dimensional range
  double min_eig_nu = 0.0;
};

MetricSuite build_metrics(const PhysicalBasis& basis, const Matrix& K, const Matrix& L);

/// C = eta_plus P (P is its own inverse).
Matrix build_charge(const Matrix& eta_plus, const Matrix& parity);

/// || C^2 - I ||, reported only.
double charge_involution_residual(const Matrix& C);

}  // namespace edkg
