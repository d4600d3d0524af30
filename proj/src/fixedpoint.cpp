#include "edkg/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace edkg {
namespace {

struct Match {
  Eigen::Index index = 0;
  double overlap = 0.0;
};

Match best_overlap(const Matrix& kets, const Vector& reference) {
  const RealVector overlaps = (reference.adjoint() * kets).cwiseAbs().transpose();
  Match m;
  m.overlap = overlaps.maxCoeff(&m.index);
  return m;
}

constexpr Eigen::Index kNeighbourWindow = 3;

struct Sample {
  double e = 0.0;
  double overlap = 1.0;
  Vector ket;
  Vector left;
  Eigen::Index index = 0;
};

void check_real(Complex e, int n, double z, const TraceOptions& opt) {
  if (std::abs(e.imag()) > opt.tol_real * (1.0 + std::abs(e))) {
    throw Error(ErrorKind::ComplexBranch,
                fmt::format("branch {} at z = {:.17g} has E = ({:.6e}, {:.6e})", n, z, e.real(),
                            e.imag()));
  }
}

// Candidate eigenpairs of H: a window of indices around `center` for real
// symmetric tridiagonal H, otherwise the whole bi-orthogonal decomposition.
struct Candidates {
  Eigen::Index offset = 0;
  Vector values;
  Matrix kets;
  Matrix lefts;
};

Candidates candidates(const Matrix& H, Eigen::Index center, const TraceOptions& opt) {
  Candidates c;
  if (auto t = as_real_tridiagonal(H)) {
    const Eigen::Index n = H.rows();
    const Eigen::Index lo = std::max<Eigen::Index>(0, center - kNeighbourWindow);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, center + kNeighbourWindow);
    const PartialSpectrum ps = tridiagonal_eigenpairs(*t, lo, hi);
    c.offset = lo;
    c.values = ps.values.cast<Complex>();
    c.kets = ps.vectors.cast<Complex>();
    c.lefts = c.kets;
    return c;
  }
  FrozenDecomposition dec = decompose(H, opt.decompose);
  c.values = std::move(dec.eigenvalues);
  c.kets = std::move(dec.right_kets);
  c.lefts = std::move(dec.left_bras);
  return c;
}

[[noreturn]] void branch_lost(int n, double z, double overlap, const TraceOptions& opt) {
  throw Error(ErrorKind::BranchLost, fmt::format("branch {} at z = {:.17g}: best overlap {:.4f} < {:.4f}",
                                                 n, z, overlap, opt.overlap_floor));
}

// Eigensolve at z and pick the eigenpair continuing `reference`. The caller
// checks the overlap.
Sample follow_unchecked(const Matrix& H, double z, const Vector& reference, Eigen::Index center,
                        int n, const TraceOptions& opt) {
  const Candidates c = candidates(H, center, opt);
  const Match m = best_overlap(c.kets, reference);
  if (m.overlap < opt.overlap_floor) {
    Sample lost;
    lost.overlap = m.overlap;
    return lost;
  }
  Sample s;
  s.index = c.offset + m.index;
  s.overlap = m.overlap;
  s.ket = c.kets.col(m.index);
  s.left = c.lefts.col(m.index);
  check_real(c.values(m.index), n, z, opt);
  s.e = c.values(m.index).real();
  return s;
}

Sample follow(const Matrix& H, double z, const Vector& reference, Eigen::Index center, int n,
              const TraceOptions& opt) {
  Sample s = follow_unchecked(H, z, reference, center, n, opt);
  if (s.overlap < opt.overlap_floor) branch_lost(n, z, s.overlap, opt);
  return s;
}

Sample follow(const Family& family, double z, const Vector& reference, Eigen::Index center,
              int n, const TraceOptions& opt) {
  return follow(family(z), z, reference, center, n, opt);
}

void check_window(const MassModel& model, double z_lo, double z_hi) {
  if (const auto* ho = std::get_if<HOQuadratic>(&model)) {
    if (ho->E0 >= z_lo && ho->E0 <= z_hi) {
      throw Error(ErrorKind::DegenerateMass,
                  fmt::format("window [{:.17g}, {:.17g}] contains the mass singularity E0 = {:.17g}",
                              z_lo, z_hi, ho->E0));
    }
  }
}

}  // namespace

EnergyBranch trace_branch(const Family& family, int n, double z_lo, double z_hi, int steps,
                          const TraceOptions& options) {
  if (!(z_lo < z_hi)) throw Error(ErrorKind::InvalidArgument, "trace window needs z_lo < z_hi");
  if (steps < 2) throw Error(ErrorKind::InvalidArgument, "trace needs at least 2 steps");
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "branch index must be non-negative");

  EnergyBranch branch;
  branch.branch_index = n;
  branch.family = family;
  branch.options = options;

  const Matrix H0 = family(z_lo);
  if (n >= H0.rows()) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("branch {} requested but H(z) has dimension {}", n, H0.rows()));
  }
  // Index order at the first sample.
  const Candidates first = candidates(H0, n, options);
  const Eigen::Index local = n - first.offset;
  check_real(first.values(local), n, z_lo, options);
  branch.z_samples.push_back(z_lo);
  branch.e_values.push_back(first.values(local).real());
  branch.kets.push_back(first.kets.col(local));
  branch.indices.push_back(n);

  for (int k = 1; k <= steps; ++k) {
    const double target = k == steps ? z_hi : z_lo + (z_hi - z_lo) * k / steps;
    // Where the eigenvector turns quickly, halve the step until continuation holds.
    while (branch.z_samples.back() < target) {
      const double z_prev = branch.z_samples.back();
      double z = target;
      Sample s;
      for (int halving = 0;; ++halving) {
        s = follow_unchecked(family(z), z, branch.kets.back(), branch.indices.back(), n, options);
        if (s.overlap >= options.overlap_floor) break;
        if (halving >= options.max_step_halvings) branch_lost(n, z, s.overlap, options);
        z = z_prev + 0.5 * (z - z_prev);
      }
      branch.z_samples.push_back(z);
      branch.e_values.push_back(s.e);
      branch.continuity_overlaps.push_back(s.overlap);
      branch.kets.push_back(std::move(s.ket));
      branch.indices.push_back(s.index);
    }
  }
  return branch;
}

EnergyBranch trace_branch(const MassModel& model, const Grid& grid, int n, double z_lo,
                          double z_hi, int steps, ProblemKind kind, const TraceOptions& options) {
  check_window(model, z_lo, z_hi);
  return trace_branch(frozen_family(grid, model, kind), n, z_lo, z_hi, steps, options);
}

std::vector<FixedPoint> solve_fixed_points(const EnergyBranch& branch) {
  return solve_fixed_points(branch, branch.options.refine_tol);
}

std::vector<FixedPoint> solve_fixed_points(const EnergyBranch& branch, double refine_tol) {
  if (!(refine_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "refine_tol must be positive");
  const TraceOptions& opt = branch.options;
  const int n = branch.branch_index;
  std::vector<FixedPoint> roots;

  const std::size_t count = branch.z_samples.size();
  for (std::size_t k = 0; k < count; ++k) {
    const double z = branch.z_samples[k];
    const double f = branch.e_values[k] - z;
    if (f == 0.0) {
      roots.push_back({z, 0, 0.0, branch.kets[k], branch.indices[k]});
      continue;
    }
    if (k + 1 == count) break;
    const double f_next = branch.e_values[k + 1] - branch.z_samples[k + 1];
    if (f_next == 0.0 || (f > 0.0) == (f_next > 0.0)) continue;

    double lo = z;
    double hi = branch.z_samples[k + 1];
    double f_lo = f;
    Vector ket_lo = branch.kets[k];
    Eigen::Index index_lo = branch.indices[k];
    FixedPoint fp;
    bool done = false;
    for (int it = 0; it < opt.max_bisections; ++it) {
      const double mid = 0.5 * (lo + hi);
      Sample s = follow(branch.family, mid, ket_lo, index_lo, n, opt);
      const double f_mid = s.e - mid;
      fp = {mid, 0, std::abs(f_mid), s.ket, s.index};
      const bool converged = (hi - lo) <= refine_tol &&
                             std::abs(f_mid) <= refine_tol * (1.0 + std::abs(mid));
      if (converged || f_mid == 0.0) {
        done = true;
        break;
      }
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
        ket_lo = std::move(s.ket);
        index_lo = s.index;
      } else {
        hi = mid;
      }
      if (mid == lo && mid == hi) break;
    }
    if (!done) {
      throw Error(ErrorKind::RefinementStall,
                  fmt::format("branch {}: bisection in [{:.17g}, {:.17g}] did not reach {:.1e}", n,
                              lo, hi, refine_tol));
    }
    roots.push_back(std::move(fp));
  }

  std::sort(roots.begin(), roots.end(),
            [](const FixedPoint& a, const FixedPoint& b) { return a.z < b.z; });
  std::vector<FixedPoint> merged;
  for (auto& r : roots) {
    if (!merged.empty() && std::abs(r.z - merged.back().z) <= 1e-8 * (1.0 + std::abs(r.z))) {
      continue;
    }
    merged.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < merged.size(); ++j) merged[j].j = static_cast<int>(j);
  return merged;
}

CollectResult collect_physical(const Family& family, const std::vector<int>& branches,
                               const std::vector<std::pair<double, double>>& windows, int steps,
                               const TraceOptions& options) {
  CollectResult result;
  for (const int n : branches) {
    std::vector<FixedPoint> roots;
    for (const auto& w : windows) {
      BranchReport report{n, w, 0, {}};
      try {
        const EnergyBranch branch = trace_branch(family, n, w.first, w.second, steps, options);
        auto found = solve_fixed_points(branch);
        report.roots = static_cast<int>(found.size());
        for (auto& f : found) roots.push_back(std::move(f));
      } catch (const Error& e) {
        report.error = e.what();
      }
      result.reports.push_back(std::move(report));
    }
    std::sort(roots.begin(), roots.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.z < b.z; });

    int j = 0;
    double last_z = 0.0;
    for (const auto& root : roots) {
      if (j > 0 && std::abs(root.z - last_z) <= 1e-8 * (1.0 + std::abs(root.z))) continue;
      const double energy = root.z;
      const Matrix H = family(energy);
      const Sample s = follow(H, energy, root.ket, root.index, n, options);
      PhysicalLevel level;
      level.n = n;
      level.j = j++;
      level.energy = energy;
      level.right_ket = s.ket;
      level.left_bra = s.left;
      level.residual = (H * level.right_ket - energy * level.right_ket).norm();
      result.levels.push_back(std::move(level));
      last_z = root.z;
    }
  }
  return result;
}

CollectResult collect_physical(const MassModel& model, const Grid& grid,
                               const std::vector<int>& branches,
                               const std::vector<std::pair<double, double>>& windows,
                               ProblemKind kind, int steps, const TraceOptions& options) {
  const Family family = frozen_family(grid, model, kind);
  std::vector<std::pair<double, double>> usable;
  CollectResult rejected;
  for (const auto& w : windows) {
    try {
      check_window(model, w.first, w.second);
      usable.push_back(w);
    } catch (const Error& e) {
      for (const int n : branches) rejected.reports.push_back({n, w, 0, e.what()});
    }
  }
  CollectResult result = collect_physical(family, branches, usable, steps, options);
  result.reports.insert(result.reports.end(), rejected.reports.begin(), rejected.reports.end());
  return result;
}

}  // namespace edkg
