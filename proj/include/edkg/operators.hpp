#pragma once

#include <functional>
#include <variant>

#include "edkg/types.hpp"

namespace edkg {

/// Uniform grid of interior nodes. Dirichlet zeros sit one spacing outside
/// [x_min, x_max].
class Grid {
 public:
  Grid(double x_min, double x_max, Eigen::Index n_points);

  /// Half-line grid r_k = k h, k = 1..n, h = r_max / n; the Dirichlet node is r = 0.
  static Grid half_line(double r_max, Eigen::Index n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Eigen::Index size() const { return n_; }
  double spacing() const { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }
  double point(Eigen::Index i) const { return x_min_ + spacing() * static_cast<double>(i); }
  RealVector points() const;

  /// True iff x_min = -x_max to within 1e-12 |x_max|, so reversal is the reflection x -> -x.
  bool symmetric() const;

 private:
  double x_min_;
  double x_max_;
  Eigen::Index n_;
};

struct ConstantMass {
  double m;
};

/// 2 m(E) = A^2 (E - E0)^2.
struct HOQuadratic {
  double A;
  double E0;
};

struct GeneralMassSquared {
  std::function<Complex(double z, double x)> evaluator;
};

using MassModel = std::variant<ConstantMass, HOQuadratic, GeneralMassSquared>;

void validate(const MassModel& model);

enum class ProblemKind { Schrodinger, KleinGordon };

inline constexpr double kMassEpsilon = 1e-12;

/// Twice the (position independent) mass 2m(z); throws DegenerateMass at or below kMassEpsilon.
double twice_mass(const MassModel& model, double z, double eps_mass = kMassEpsilon);

/// m^2(z, x) as used in the Klein-Gordon mass term.
Complex mass_squared(const MassModel& model, double z, double x);

/// Second difference -d^2/dx^2: 2/h^2 on the diagonal, -1/h^2 next to it.
template <typename Scalar = Complex>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> build_laplacian(const Grid& grid) {
  const Eigen::Index n = grid.size();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lap =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lap(i, i) = Scalar(2.0 * inv_h2);
    if (i + 1 < n) {
      lap(i, i + 1) = Scalar(-inv_h2);
      lap(i + 1, i) = Scalar(-inv_h2);
    }
  }
  return lap;
}

/// -(1/(2m(z))) d^2/dx^2 + x^2.
Matrix build_schrodinger(const Grid& grid, const MassModel& model, double z,
                         double eps_mass = kMassEpsilon);

/// -d^2/dx^2 + m^2(z, x).
Matrix build_kleingordon(const Grid& grid, const MassModel& model, double z);

/// Reversal permutation; requires a symmetric grid.
Matrix build_parity(const Grid& grid);

struct FVSystem {
  Matrix h_sr;    ///< [[0, H], [1, 0]]
  Matrix eta_sr;  ///< [[0, eta], [eta, 0]]
  Eigen::Index base_dimension = 0;
};

/// Two-component first-order form of (i d/dt)^2 psi = H psi, with the swap
/// pseudo-metric (eta = I).
FVSystem assemble_fv(const Matrix& H);

/// Same, with the block pseudo-metric built from `eta`.
FVSystem assemble_fv(const Matrix& H, const Matrix& eta);

/// [[0, eta], [eta, 0]]. Throws NonHermitianMetric / SingularMetric.
Matrix assemble_fv_metric(const Matrix& eta);

/// The 2N x 2N swap metric [[0, I], [I, 0]].
Matrix swap_metric(Eigen::Index base_dimension);

/// || eta A - A^dagger eta ||, zero iff A^dagger = eta A eta^{-1} for invertible eta.
double intertwining_residual(const Matrix& A, const Matrix& eta);

/// A frozen family z -> H(z) for the given problem kind. For Klein-Gordon the
/// family is the FV generator, whose eigenvalues are the energies.
std::function<Matrix(double)> frozen_family(const Grid& grid, const MassModel& model,
                                            ProblemKind kind);

}  // namespace edkg
