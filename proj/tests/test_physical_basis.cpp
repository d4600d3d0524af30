#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "edkg/physical_basis.hpp"
#include "edkg/validation.hpp"

using namespace edkg;

namespace {

const Grid kSmall(-4.0, 4.0, 16);

// Every eigenvalue of H, collected as energy-independent physical levels.
PhysicalBasis constant_mass_basis(Matrix* H_out = nullptr) {
  const MassModel model = ConstantMass{0.5};
  const Matrix H = build_schrodinger(kSmall, model, 0.0);
  if (H_out) *H_out = H;
  std::vector<int> all(16);
  for (int i = 0; i < 16; ++i) all[static_cast<std::size_t>(i)] = i;
  TraceOptions opt;
  opt.refine_tol = 1e-12;
  const double top = decompose(H).eigenvalues(15).real();
  const CollectResult r =
      collect_physical(model, kSmall, all, {{-1.0, top + 1.0}}, ProblemKind::Schrodinger, 16, opt);
  REQUIRE(r.levels.size() == 16);
  return build_basis(r.levels);
}

std::vector<double> sorted_real_parts(const Matrix& M) {
  const Vector ev = Eigen::ComplexEigenSolver<Matrix>(M, false).eigenvalues();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    CHECK(std::abs(ev(i).imag()) < 1e-8);
    out.push_back(ev(i).real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("single level: trivial overlap, rank-one K") {
  Vector v(3);
  v << Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(0.0, 0.0);
  v /= std::sqrt(2.0);
  PhysicalLevel lv;
  lv.energy = 2.5;
  lv.right_ket = v;
  lv.left_bra = v;
  const PhysicalBasis b = build_basis({lv});
  CHECK(b.R.rows() == 1);
  CHECK(std::abs(b.R(0, 0) - 1.0) < 1e-14);
  CHECK((b.double_kets - b.kets).norm() < 1e-14);
  CHECK((b.double_bras - b.lefts).norm() < 1e-14);
  const Matrix K = build_K(b);
  CHECK((K - 2.5 * v * v.adjoint()).norm() < 1e-14);
  CHECK((K * v - 2.5 * v).norm() < 1e-14);
  CHECK(projector_residual(b) < 1e-14);
}

TEST_CASE("constant mass full basis reproduces the ordinary Hamiltonian") {
  Matrix H;
  const PhysicalBasis b = constant_mass_basis(&H);
  const Matrix I = Matrix::Identity(16, 16);
  CHECK((b.R - Matrix::Identity(16, 16)).norm() < 1e-8);
  CHECK((b.double_kets - b.kets).norm() < 1e-8);
  CHECK(projector_residual(b) < 1e-8);
  const Matrix K = build_K(b);
  const Matrix L = build_L(b);
  CHECK((K - H).norm() < 1e-8);
  CHECK((L - H).norm() < 1e-8);
  const MetricSuite m = build_metrics(b, K, L);
  CHECK((m.mu - I).norm() < 1e-8);
  CHECK((m.nu - I).norm() < 1e-8);
  CHECK(m.residual_K < 1e-10 * H.norm());
  CHECK(m.residual_L < 1e-10 * H.norm());
  CHECK(m.min_eig_mu == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m.min_eig_nu == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("two-level fixture: duality, one-sided actions and K != L") {
  const PhysicalBasis b = build_basis(validation::two_level_fixture());
  CHECK(std::abs(b.R(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(b.R(1, 1) - 1.0) < 1e-12);
  CHECK(std::abs(b.R(1, 0)) < 1e-12);
  CHECK(std::abs(b.R(0, 1)) > 0.5);

  const Matrix I2 = Matrix::Identity(2, 2);
  CHECK((b.double_bras.adjoint() * b.kets - I2).norm() < 1e-8);
  CHECK((b.lefts.adjoint() * b.double_kets - I2).norm() < 1e-8);

  const Matrix K = build_K(b);
  const Matrix L = build_L(b);
  for (Eigen::Index a = 0; a < 2; ++a) {
    const double E = b.energies(a);
    CHECK((K * b.kets.col(a) - E * b.kets.col(a)).norm() < 1e-10 * (1.0 + E));
    CHECK((b.lefts.col(a).adjoint() * L - E * b.lefts.col(a).adjoint()).norm() <
          1e-10 * (1.0 + E));
  }
  CHECK((K - L).norm() > 1e-3);

  // Similar operators: equal eigenvalue multisets (the two energies plus zero).
  const auto ek = sorted_real_parts(K);
  const auto el = sorted_real_parts(L);
  REQUIRE(ek.size() == el.size());
  for (std::size_t i = 0; i < ek.size(); ++i) CHECK(std::abs(ek[i] - el[i]) < 1e-8);
  CHECK(std::abs(ek[0]) < 1e-8);
  CHECK(ek[1] == doctest::Approx(1.5));
  CHECK(ek[2] == doctest::Approx(2.5));
}

TEST_CASE("incomplete basis: oblique projector properties") {
  const PhysicalBasis b = build_basis(validation::two_level_fixture());
  const Matrix P = unit_projector(b);
  CHECK((P * P - P).norm() < 1e-8);
  CHECK((P * b.kets - b.kets).norm() < 1e-8);
  CHECK(projector_residual(b) < 1e-8);
  // Both orderings of the expansion give the same operator.
  const Matrix other = b.kets * b.double_bras.adjoint();
  CHECK((P - other).norm() < 1e-10);
}

TEST_CASE("metric suite on the two-level fixture") {
  const PhysicalBasis b = build_basis(validation::two_level_fixture());
  const MetricSuite m = build_metrics(b, build_K(b), build_L(b));
  CHECK(m.residual_K < 1e-9);
  CHECK(m.residual_L < 1e-9);
  CHECK(hermiticity_residual(m.mu) < 1e-10);
  CHECK(hermiticity_residual(m.nu) < 1e-10);
  CHECK(m.min_eig_mu > 0.0);
  CHECK(m.min_eig_nu > 0.0);
  // The products reduce to the (adjoint) oblique projector on the spanned subspace.
  const Matrix Pd = unit_projector(b).adjoint();
  CHECK((m.mu * m.mu_inv - Pd).norm() < 1e-8);
  CHECK((m.nu * m.nu_inv - Pd).norm() < 1e-8);
  CHECK(std::isfinite(m.mu.norm()));
  CHECK(std::isfinite(m.nu_inv.norm()));
}

TEST_CASE("duplicated level is rejected as ill-conditioned") {
  try {
    build_basis(validation::duplicated_level_fixture());
    FAIL("expected IllConditionedOverlap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllConditionedOverlap);
    CHECK(std::string(e.what()).find("condition") != std::string::npos);
  }
}

TEST_CASE("basis input validation") {
  CHECK_THROWS_AS(build_basis({}), Error);
  auto levels = validation::two_level_fixture();
  levels[1].left_bra = Vector::Zero(2);
  CHECK_THROWS_AS(build_basis(levels), Error);
  std::vector<PhysicalLevel> too_many(4, validation::two_level_fixture()[0]);
  CHECK_THROWS_AS(build_basis(too_many), Error);
}

TEST_CASE("charge operator") {
  const Grid g(-3.0, 3.0, 7);
  const Matrix P = build_parity(g);
  const Matrix I = Matrix::Identity(7, 7);
  const Matrix C = build_charge(I, P);
  CHECK((C - P).norm() < 1e-15);
  CHECK(charge_involution_residual(C) < 1e-15);

  // C P reproduces the metric by construction.
  Matrix eta = I;
  eta(0, 6) = eta(6, 0) = 0.25;
  const Matrix C2 = build_charge(eta, P);
  CHECK((C2 * P - eta).norm() < 1e-15);
  CHECK_THROWS_AS(build_charge(I, Matrix::Identity(5, 5)), Error);
  CHECK_THROWS_AS(build_charge(I, 2.0 * I), Error);
}
