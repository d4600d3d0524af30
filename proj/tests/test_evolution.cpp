#include "doctest.h"

#include <cmath>

#include "edkg/evolution.hpp"

using namespace edkg;

namespace {

FVSystem kg_system(const Grid& g) { return assemble_fv(build_kleingordon(g, ConstantMass{1.0}, 0.0)); }

}  // namespace

TEST_CASE("eigenstate picks up a pure phase") {
  const Grid g(-5.0, 5.0, 21);
  const FVSystem fv = kg_system(g);
  const FrozenDecomposition dec = decompose(fv.h_sr);
  const Eigen::Index k = 7;
  const FVState initial = FVState::from_stacked(dec.right_kets.col(k), 0.0);
  const Trajectory traj = evolve(dec, initial, 3.0, 6);
  REQUIRE(traj.states.size() == 7);
  CHECK_FALSE(traj.complex_spectrum);
  for (const auto& s : traj.states) {
    const Vector expected = std::exp(Complex(0.0, -s.t) * dec.eigenvalues(k)) * initial.stacked();
    CHECK((s.stacked() - expected).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK(traj.states.back().t == doctest::Approx(3.0));
}

TEST_CASE("one-dimensional oscillator matches the analytic solution") {
  Matrix H(1, 1);
  H(0, 0) = 4.0;
  const FVSystem fv = assemble_fv(H);
  const Complex phi1(0.3, -0.2), phi2(1.0, 0.5);
  // phi2 = a e^{-2it} + b e^{2it}, phi1 = i d/dt phi2.
  const Complex a = (phi1 + 2.0 * phi2) / 4.0;
  const Complex b = (2.0 * phi2 - phi1) / 4.0;
  FVState s0{Vector::Constant(1, phi1), Vector::Constant(1, phi2), 0.0};
  const Trajectory traj = evolve(fv, s0, 2.0, 10);
  for (const auto& s : traj.states) {
    const Complex ep = std::exp(Complex(0.0, -2.0 * s.t));
    const Complex em = std::exp(Complex(0.0, 2.0 * s.t));
    CHECK(std::abs(s.phi2(0) - (a * ep + b * em)) < 1e-10);
    CHECK(std::abs(s.phi1(0) - (2.0 * a * ep - 2.0 * b * em)) < 1e-10);
  }
}

TEST_CASE("zero duration or zero steps return the initial state") {
  const Grid g(-5.0, 5.0, 11);
  const FVSystem fv = kg_system(g);
  const Vector v = gaussian(g, 0.0, 1.0, 0.0);
  const FVState s0{v, v, 0.0};
  CHECK(evolve(fv, s0, 0.0, 10).states.size() == 1);
  CHECK(evolve(fv, s0, 5.0, 0).states.size() == 1);
  CHECK((evolve(fv, s0, 0.0, 10).states[0].stacked() - s0.stacked()).norm() == 0.0);
  CHECK_THROWS_AS(evolve(fv, s0, 1.0, -1), Error);
  const FVState wrong{Vector::Zero(3), Vector::Zero(3), 0.0};
  CHECK_THROWS_AS(evolve(fv, wrong, 1.0, 1), Error);
}

TEST_CASE("pseudo-norm quadratic forms") {
  Vector v(3);
  v << Complex(1.0, 2.0), Complex(-0.5, 0.0), Complex(0.0, 3.0);
  const FVState plus{v, v, 0.0};
  const FVState minus{v, -v, 0.0};
  CHECK(pseudo_norm(plus, Matrix::Identity(6, 6)).value == doctest::Approx(2.0 * v.squaredNorm()));
  CHECK(pseudo_norm(plus, swap_metric(3)).value == doctest::Approx(2.0 * v.squaredNorm()));
  CHECK(pseudo_norm(minus, swap_metric(3)).value == doctest::Approx(-2.0 * v.squaredNorm()));
  CHECK(pseudo_norm(plus, swap_metric(3)).imag_residue < 1e-15);
  CHECK_THROWS_AS(pseudo_norm(plus, Matrix::Identity(4, 4)), Error);

  // A positive metric gives positive values for every nonzero state.
  const Grid g(-3.0, 3.0, 7);
  const FVSystem fv = kg_system(g);
  const FrozenDecomposition dec = decompose(fv.h_sr);
  const Matrix eta = eta_from_decomposition(dec);
  const Vector w = gaussian(g, 0.5, 1.0, 0.7);
  for (const auto& s : {FVState{w, w, 0.0}, FVState{w, -w, 0.0}, FVState{w, 0.0 * w, 0.0}}) {
    CHECK(pseudo_norm(s, eta).value > 0.0);
  }
}

TEST_CASE("conservation under the swap metric, drift under the wrong one") {
  const Grid g(-10.0, 10.0, 61);
  const FVSystem fv = kg_system(g);
  const Vector v = gaussian(g, -2.0, 1.0, 1.5);
  const Trajectory traj = evolve(fv, FVState{v, v, 0.0}, 10.0, 100);
  const ConservationReport good = conservation_report(traj, fv.eta_sr, fv);
  CHECK(good.pass);
  CHECK(good.max_relative_drift < 1e-8);
  CHECK(good.intertwining < 1e-12);

  const Matrix I = Matrix::Identity(fv.h_sr.rows(), fv.h_sr.cols());
  const ConservationReport bad = conservation_report(traj, I, fv);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_relative_drift > 1e-3);
}

TEST_CASE("zero state has no drift") {
  const Grid g(-3.0, 3.0, 7);
  const FVSystem fv = kg_system(g);
  const Vector z = Vector::Zero(7);
  const Trajectory traj = evolve(fv, FVState{z, z, 0.0}, 1.0, 4);
  const ConservationReport r = conservation_report(traj, fv.eta_sr, fv);
  CHECK(r.degenerate_initial);
  CHECK(r.max_relative_drift == 0.0);
}

TEST_CASE("propagation composes") {
  const Grid g(-6.0, 6.0, 31);
  const FVSystem fv = kg_system(g);
  const FrozenDecomposition dec = decompose(fv.h_sr);
  const Vector v = gaussian(g, 1.0, 0.8, -1.0);
  const FVState s0{0.3 * v, v, 0.0};
  const FVState at_t1 = evolve(dec, s0, 1.3, 1).states.back();
  const FVState two_legs = evolve(dec, at_t1, 2.4, 1).states.back();
  const FVState direct = evolve(dec, s0, 3.7, 1).states.back();
  CHECK((two_legs.stacked() - direct.stacked()).norm() < 1e-8);
  CHECK(two_legs.t == doctest::Approx(3.7));
}

TEST_CASE("gaussian initial data") {
  const Grid g(-5.0, 5.0, 51);
  const Vector v = gaussian(g, 0.0, 1.0, 2.0);
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK(std::abs(v(25)) > std::abs(v(10)));
  CHECK_THROWS_AS(gaussian(g, 0.0, 0.0, 0.0), Error);
}
