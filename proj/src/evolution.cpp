#include "edkg/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace edkg {

Vector FVState::stacked() const {
  Vector v(phi1.size() + phi2.size());
  v << phi1, phi2;
  return v;
}

FVState FVState::from_stacked(const Vector& v, double t) {
  const Eigen::Index n = v.size() / 2;
  return {v.head(n), v.tail(n), t};
}

Trajectory evolve(const FrozenDecomposition& generator, const FVState& state, double t_final,
                  int steps) {
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be non-negative");
  if (state.phi1.size() != state.phi2.size() ||
      2 * state.phi1.size() != generator.right_kets.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "state does not match the FV system");
  }
  if (!state.phi1.allFinite() || !state.phi2.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "state has non-finite entries");
  }

  Trajectory traj;
  traj.complex_spectrum = !generator.real_spectrum();
  traj.states.push_back(state);
  if (steps == 0 || t_final == 0.0) return traj;

  const Vector coeffs = generator.left_bras.adjoint() * state.stacked();
  for (int k = 1; k <= steps; ++k) {
    const double dt = t_final * k / steps;
    const Vector phases =
        (Complex(0.0, -dt) * generator.eigenvalues).array().exp().matrix().cwiseProduct(coeffs);
    traj.states.push_back(FVState::from_stacked(generator.right_kets * phases, state.t + dt));
  }
  return traj;
}

Trajectory evolve(const FVSystem& system, const FVState& state, double t_final, int steps) {
  return evolve(decompose(system.h_sr), state, t_final, steps);
}

PseudoNorm pseudo_norm(const FVState& state, const Matrix& metric) {
  const Vector v = state.stacked();
  if (metric.rows() != v.size() || metric.cols() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("metric is {}x{}, state has {} components", metric.rows(),
                            metric.cols(), v.size()));
  }
  const Complex q = v.dot(metric * v);
  PseudoNorm out;
  out.value = q.real();
  out.imag_residue = std::abs(q) > 0.0 ? std::abs(q.imag()) / std::abs(q) : 0.0;
  return out;
}

ConservationReport conservation_report(const std::vector<FVState>& trajectory,
                                       const Matrix& metric, const Matrix& generator,
                                       bool real_spectrum) {
  ConservationReport r;
  r.real_spectrum = real_spectrum;
  const double scale = generator.norm() * metric.norm();
  r.intertwining = scale > 0.0 ? intertwining_residual(generator, metric) / scale : 0.0;
  if (trajectory.empty()) return r;

  r.initial_norm = pseudo_norm(trajectory.front(), metric).value;
  const double floor = 1e-300;
  r.degenerate_initial = std::abs(r.initial_norm) < floor;
  if (r.degenerate_initial) {
    // A vanishing initial quadratic form has no relative drift to speak of.
    r.max_relative_drift = 0.0;
  } else {
    const double denom = std::max(std::abs(r.initial_norm), floor);
    for (const auto& s : trajectory) {
      const double drift = std::abs(pseudo_norm(s, metric).value - r.initial_norm) / denom;
      r.max_relative_drift = std::max(r.max_relative_drift, drift);
    }
  }
  r.pass = r.real_spectrum && r.intertwining <= kIntertwiningTolerance &&
           r.max_relative_drift <= kConservationTolerance;
  return r;
}

ConservationReport conservation_report(const Trajectory& trajectory, const Matrix& metric,
                                       const FVSystem& system) {
  return conservation_report(trajectory.states, metric, system.h_sr, !trajectory.complex_spectrum);
}

Vector gaussian(const Grid& grid, double center, double width, double momentum) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "gaussian width must be positive");
  Vector g(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    const double d = (x - center) / width;
    g(i) = std::exp(-0.5 * d * d) * std::exp(Complex(0.0, momentum * x));
  }
  const double nrm = g.norm();
  if (nrm == 0.0) throw Error(ErrorKind::InvalidArgument, "gaussian vanishes on the grid");
  return g / nrm;
}

}  // namespace edkg
