#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "edkg/types.hpp"

namespace edkg {

/// Bi-orthonormal spectral decomposition of a frozen H(z):
///   H = sum_n |R_n> E_n <L_n|,   <L_m|R_n> = delta_mn.
/// Right kets and left vectors are stored as columns; the bra <L_n| is the
/// adjoint of column n of `left_bras`. Right kets have unit norm and their
/// largest component is real positive; the left vectors carry the scale.
struct FrozenDecomposition {
  double z = 0.0;
  Vector eigenvalues;
  Matrix right_kets;
  Matrix left_bras;
  double biorth_residual = 0.0;       ///< max |<L_m|R_n> - delta_mn|
  double completeness_residual = 0.0; ///< || sum |R_n><L_n| - I ||
  std::vector<bool> reality_flags;
  double operator_norm = 0.0;         ///< ||H|| used for relative tolerances
  bool hermitian_input = false;

  Eigen::Index size() const { return eigenvalues.size(); }
  bool real_spectrum() const;
};

struct DecomposeOptions {
  double degeneracy_rel = 1e-8;  ///< DegenerateSpectrum below this * ||H||
  double pair_rel = 1e-6;        ///< PairingFailure above this * ||H||
  double tol_real = 1e-8;        ///< |Im E| <= tol_real (1 + |E|) counts as real
};

FrozenDecomposition decompose(const Matrix& H, const DecomposeOptions& options = {});

/// Tagged with the frozen parameter it was computed at.
FrozenDecomposition decompose_at(const Matrix& H, double z, const DecomposeOptions& options = {});

/// sum_n s_n |L_n><L_n|; all +1 gives the positive metric candidate.
Matrix eta_from_decomposition(const FrozenDecomposition& dec, const std::vector<int>& signs);
Matrix eta_from_decomposition(const FrozenDecomposition& dec);

/// sum_n s_n |R_n><R_n|, the inverse of the matching eta.
Matrix eta_inverse_from_decomposition(const FrozenDecomposition& dec,
                                      const std::vector<int>& signs);
Matrix eta_inverse_from_decomposition(const FrozenDecomposition& dec);

/// sum_n |R_n> E_n <L_n|.
Matrix reconstruct(const FrozenDecomposition& dec);

struct SpectrumReport {
  std::vector<Eigen::Index> real;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> conjugate_pairs;
  std::vector<Eigen::Index> unpaired_complex;
  bool conjugation_warning = false;
};

/// Real singlets, complex-conjugate pairs, and complex eigenvalues without a partner.
SpectrumReport classify_spectrum(const FrozenDecomposition& dec, double tol_real = 1e-8);

/// Real symmetric tridiagonal view of H, when H has that form exactly.
struct Tridiagonal {
  RealVector diagonal;
  RealVector offdiagonal;
};

std::optional<Tridiagonal> as_real_tridiagonal(const Matrix& H);

/// Eigenpairs with ascending indices first..last of a real symmetric
/// tridiagonal matrix: all eigenvalues from the implicit QL sweep, vectors by
/// inverse iteration on the selected ones only. Vectors are unit norm with the
/// same phase convention as decompose().
struct PartialSpectrum {
  Eigen::Index first = 0;
  RealVector values;
  Eigen::MatrixXd vectors;
};

PartialSpectrum tridiagonal_eigenpairs(const Tridiagonal& t, Eigen::Index first,
                                       Eigen::Index last);

}  // namespace edkg
