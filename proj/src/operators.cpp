#include "edkg/operators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

namespace edkg {

Grid::Grid(double x_min, double x_max, Eigen::Index n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max)) || !(x_min < x_max)) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("grid requires x_min < x_max, got [{}, {}]", x_min, x_max));
  }
  if (n_points < 3) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("grid requires at least 3 points, got {}", n_points));
  }
}

Grid Grid::half_line(double r_max, Eigen::Index n_points) {
  if (!(r_max > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "half-line grid requires r_max > 0");
  }
  if (n_points < 3) {
    throw Error(ErrorKind::InvalidArgument, "half-line grid requires at least 3 points");
  }
  return Grid(r_max / static_cast<double>(n_points), r_max, n_points);
}

RealVector Grid::points() const {
  RealVector x(n_);
  for (Eigen::Index i = 0; i < n_; ++i) x(i) = point(i);
  return x;
}

bool Grid::symmetric() const {
  return std::abs(x_min_ + x_max_) <= 1e-12 * std::abs(x_max_);
}

void validate(const MassModel& model) {
  if (const auto* c = std::get_if<ConstantMass>(&model)) {
    if (!(c->m > 0.0)) throw Error(ErrorKind::InvalidArgument, "ConstantMass requires m > 0");
  } else if (const auto* ho = std::get_if<HOQuadratic>(&model)) {
    if (!(ho->A > 0.0)) throw Error(ErrorKind::InvalidArgument, "HOQuadratic requires A > 0");
    if (!std::isfinite(ho->E0)) throw Error(ErrorKind::InvalidArgument, "HOQuadratic E0 must be finite");
  } else if (const auto* g = std::get_if<GeneralMassSquared>(&model)) {
    if (!g->evaluator) throw Error(ErrorKind::InvalidArgument, "GeneralMassSquared has no evaluator");
  }
}

double twice_mass(const MassModel& model, double z, double eps_mass) {
  validate(model);
  double two_m = 0.0;
  if (const auto* c = std::get_if<ConstantMass>(&model)) {
    two_m = 2.0 * c->m;
  } else if (const auto* ho = std::get_if<HOQuadratic>(&model)) {
    const double d = z - ho->E0;
    two_m = ho->A * ho->A * d * d;
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "the Schrodinger builder needs a position-independent mass m(z)");
  }
  if (!(two_m > eps_mass)) {
    throw Error(ErrorKind::DegenerateMass,
                fmt::format("2m(z) = {:.6e} at z = {:.17g} is below the threshold {:.1e}", two_m,
                            z, eps_mass));
  }
  return two_m;
}

Complex mass_squared(const MassModel& model, double z, double x) {
  validate(model);
  if (const auto* c = std::get_if<ConstantMass>(&model)) return Complex(c->m * c->m);
  if (const auto* ho = std::get_if<HOQuadratic>(&model)) {
    const double d = z - ho->E0;
    const double m = 0.5 * ho->A * ho->A * d * d;
    return Complex(m * m);
  }
  const auto& g = std::get<GeneralMassSquared>(model);
  Complex value;
  try {
    value = g.evaluator(z, x);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::EvaluationFailure,
                fmt::format("m^2({:.17g}, {:.17g}) threw: {}", z, x, e.what()));
  }
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorKind::EvaluationFailure,
                fmt::format("m^2({:.17g}, {:.17g}) is not finite", z, x));
  }
  return value;
}

Matrix build_schrodinger(const Grid& grid, const MassModel& model, double z, double eps_mass) {
  const double kinetic = 1.0 / twice_mass(model, z, eps_mass);
  Matrix h = kinetic * build_laplacian<Complex>(grid);
  const RealVector x = grid.points();
  h.diagonal().real() += x.array().square().matrix();
  return h;
}

Matrix build_kleingordon(const Grid& grid, const MassModel& model, double z) {
  Matrix h = build_laplacian<Complex>(grid);
  for (Eigen::Index i = 0; i < grid.size(); ++i) h(i, i) += mass_squared(model, z, grid.point(i));
  return h;
}

Matrix build_parity(const Grid& grid) {
  if (!grid.symmetric()) {
    throw Error(ErrorKind::AsymmetricGrid,
                fmt::format("parity needs x_min = -x_max, got [{}, {}]", grid.x_min(),
                            grid.x_max()));
  }
  const Eigen::Index n = grid.size();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, n - 1 - i) = 1.0;
  return p;
}

Matrix swap_metric(Eigen::Index base_dimension) {
  const Eigen::Index n = base_dimension;
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n).setIdentity();
  s.bottomLeftCorner(n, n).setIdentity();
  return s;
}

Matrix assemble_fv_metric(const Matrix& eta) {
  if (eta.rows() != eta.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "metric must be square");
  }
  if (!is_hermitian(eta, 1e-10)) {
    throw Error(ErrorKind::NonHermitianMetric,
                fmt::format("||eta - eta^+|| = {:.3e}", hermiticity_residual(eta)));
  }
  const Eigen::JacobiSVD<Matrix> svd(eta);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  const double cond = smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) {
    throw Error(ErrorKind::SingularMetric, fmt::format("condition number {:.3e} > 1e12", cond));
  }
  const Eigen::Index n = eta.rows();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n) = eta;
  m.bottomLeftCorner(n, n) = eta;
  return m;
}

FVSystem assemble_fv(const Matrix& H) {
  if (H.rows() != H.cols()) throw Error(ErrorKind::DimensionMismatch, "H must be square");
  const Eigen::Index n = H.rows();
  FVSystem fv;
  fv.base_dimension = n;
  fv.h_sr = Matrix::Zero(2 * n, 2 * n);
  fv.h_sr.topRightCorner(n, n) = H;
  fv.h_sr.bottomLeftCorner(n, n).setIdentity();
  fv.eta_sr = swap_metric(n);
  return fv;
}

FVSystem assemble_fv(const Matrix& H, const Matrix& eta) {
  if (eta.rows() != H.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "metric and Hamiltonian dimensions differ");
  }
  FVSystem fv = assemble_fv(H);
  fv.eta_sr = assemble_fv_metric(eta);
  return fv;
}

double intertwining_residual(const Matrix& A, const Matrix& eta) {
  return (eta * A - A.adjoint() * eta).norm();
}

std::function<Matrix(double)> frozen_family(const Grid& grid, const MassModel& model,
                                            ProblemKind kind) {
  validate(model);
  if (kind == ProblemKind::Schrodinger) {
    return [grid, model](double z) { return build_schrodinger(grid, model, z); };
  }
  return [grid, model](double z) { return assemble_fv(build_kleingordon(grid, model, z)).h_sr; };
}

}  // namespace edkg
