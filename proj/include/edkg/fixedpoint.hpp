#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "edkg/frozen_spectrum.hpp"
#include "edkg/operators.hpp"

namespace edkg {

/// z -> H(z), the frozen-parameter family of an energy-dependent problem.
using Family = std::function<Matrix(double)>;

// Real symmetric tridiagonal H(z) (the Schrodinger family) is tracked with
// selective eigenpairs near the previous index instead of full decompositions.

struct TraceOptions {
  double overlap_floor = 0.7;
  double tol_real = 1e-8;
  double refine_tol = 1e-10;
  int max_bisections = 200;
  int max_step_halvings = 12;  ///< sample-step refinement before BranchLost is raised
  DecomposeOptions decompose;
};

/// One eigenvalue branch E^(n)(z) followed by eigenvector continuation.
struct EnergyBranch {
  int branch_index = 0;
  std::vector<double> z_samples;
  std::vector<double> e_values;
  std::vector<double> continuity_overlaps;  ///< |<ket(z_k)|ket(z_k+1)>|, one per interval
  std::vector<Vector> kets;                 ///< tracked unit right ket at each sample
  std::vector<Eigen::Index> indices;        ///< position of the branch in the sorted spectrum
  Family family;
  TraceOptions options;
};

EnergyBranch trace_branch(const Family& family, int n, double z_lo, double z_hi, int steps,
                          const TraceOptions& options = {});

EnergyBranch trace_branch(const MassModel& model, const Grid& grid, int n, double z_lo,
                          double z_hi, int steps, ProblemKind kind,
                          const TraceOptions& options = {});

struct FixedPoint {
  double z = 0.0;      ///< z* with E^(n)(z*) = z*
  int j = 0;           ///< root counter, ascending in z*
  double mismatch = 0; ///< |E^(n)(z*) - z*| from the last eigensolve
  Vector ket;          ///< tracked right ket at z*
  Eigen::Index index = 0;
};

/// Brackets every sign change of E^(n)(z) - z and bisects it with fresh eigensolves.
std::vector<FixedPoint> solve_fixed_points(const EnergyBranch& branch);
std::vector<FixedPoint> solve_fixed_points(const EnergyBranch& branch, double refine_tol);

/// A physical level alpha = (n, j) at its own energy E_alpha.
struct PhysicalLevel {
  int n = 0;
  int j = 0;
  double energy = 0.0;
  Vector right_ket;  ///< |phi^alpha>, unit norm
  Vector left_bra;   ///< |phi_alpha>, with <phi_alpha|phi^alpha> = 1
  double residual = 0.0;  ///< || H(E) |phi^alpha> - E |phi^alpha> ||
};

struct BranchReport {
  int n = 0;
  std::pair<double, double> window;
  int roots = 0;
  std::string error;  ///< empty on success
};

struct CollectResult {
  std::vector<PhysicalLevel> levels;
  std::vector<BranchReport> reports;
};

CollectResult collect_physical(const Family& family, const std::vector<int>& branches,
                               const std::vector<std::pair<double, double>>& windows,
                               int steps = 64, const TraceOptions& options = {});

CollectResult collect_physical(const MassModel& model, const Grid& grid,
                               const std::vector<int>& branches,
                               const std::vector<std::pair<double, double>>& windows,
                               ProblemKind kind, int steps = 64,
                               const TraceOptions& options = {});

}  // namespace edkg
