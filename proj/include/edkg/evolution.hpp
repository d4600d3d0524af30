#pragma once

#include <vector>

#include "edkg/frozen_spectrum.hpp"
#include "edkg/operators.hpp"

namespace edkg {

/// phi2 is the Klein-Gordon field, phi1 = i d/dt phi2.
struct FVState {
  Vector phi1;
  Vector phi2;
  double t = 0.0;

  Vector stacked() const;
  static FVState from_stacked(const Vector& v, double t);
};

struct Trajectory {
  std::vector<FVState> states;
  bool complex_spectrum = false;  ///< evolution proceeded with non-real frequencies
};

/// Exact spectral propagation exp(-i h t) from the bi-orthogonal
/// decomposition of h_sr; `steps` equal intervals, initial state included.
Trajectory evolve(const FVSystem& system, const FVState& state, double t_final, int steps);

/// Same, reusing a decomposition of system.h_sr.
Trajectory evolve(const FrozenDecomposition& generator, const FVState& state, double t_final,
                  int steps);

struct PseudoNorm {
  double value = 0.0;
  double imag_residue = 0.0;  ///< |Im <Phi|M|Phi>| relative to |<Phi|M|Phi>|
};

PseudoNorm pseudo_norm(const FVState& state, const Matrix& metric);

struct ConservationReport {
  double max_relative_drift = 0.0;
  double initial_norm = 0.0;
  bool degenerate_initial = false;  ///< zero initial pseudo-norm
  bool real_spectrum = true;
  double intertwining = 0.0;        ///< ||M h - h^dagger M|| / (||h|| ||M||)
  bool pass = false;
};

inline constexpr double kConservationTolerance = 1e-8;
inline constexpr double kIntertwiningTolerance = 1e-10;

ConservationReport conservation_report(const std::vector<FVState>& trajectory,
                                       const Matrix& metric, const Matrix& generator,
                                       bool real_spectrum);

ConservationReport conservation_report(const Trajectory& trajectory, const Matrix& metric,
                                       const FVSystem& system);

/// Gaussian exp(-(x-c)^2 / (2 w^2) + i k x) on the grid, unit Euclidean norm.
Vector gaussian(const Grid& grid, double center, double width, double momentum);

}  // namespace edkg
