#include "doctest.h"

#include <random>

#include "edkg/frozen_spectrum.hpp"

using namespace edkg;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Non-normal matrix with a prescribed real, well separated spectrum.
Matrix random_real_spectrum(std::mt19937_64& rng, Eigen::Index n) {
  const Matrix V = random_matrix(rng, n) + 3.0 * Matrix::Identity(n, n);
  Eigen::VectorXcd d(n);
  for (Eigen::Index k = 0; k < n; ++k) d(k) = Complex(static_cast<double>(k) - 0.5 * n + 0.1, 0.0);
  return V * d.asDiagonal() * V.inverse();
}

void check_decomposition(const Matrix& H, const FrozenDecomposition& dec) {
  const double scale = H.norm();
  CHECK(dec.biorth_residual <= 1e-8);
  CHECK(dec.completeness_residual <= 1e-8);
  CHECK((reconstruct(dec) - H).norm() <= 1e-8 * scale);
  for (Eigen::Index n = 0; n < dec.size(); ++n) {
    CHECK(dec.right_kets.col(n).norm() == doctest::Approx(1.0));
    if (n + 1 < dec.size()) {
      const Complex a = dec.eigenvalues(n), b = dec.eigenvalues(n + 1);
      CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }
}

}  // namespace

TEST_CASE("hermitian diagonal") {
  Matrix H = Matrix::Zero(2, 2);
  H.diagonal() << 1.0, 2.0;
  const FrozenDecomposition dec = decompose(H);
  CHECK(std::abs(dec.eigenvalues(0) - 1.0) < 1e-14);
  CHECK(std::abs(dec.eigenvalues(1) - 2.0) < 1e-14);
  CHECK((dec.right_kets - Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK((dec.left_bras - Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK(dec.biorth_residual < 1e-14);
  CHECK(dec.completeness_residual < 1e-14);
}

TEST_CASE("upper triangular 2x2 by hand") {
  Matrix H(2, 2);
  H << 1, 1, 0, 2;
  const FrozenDecomposition dec = decompose(H);
  CHECK_FALSE(dec.hermitian_input);
  CHECK(std::abs(dec.eigenvalues(0) - 1.0) < 1e-14);
  CHECK(std::abs(dec.eigenvalues(1) - 2.0) < 1e-14);
  const double s = 1.0 / std::sqrt(2.0);
  // Right kets (1,0), (1,1)/sqrt2; left vectors (1,-1), (0,sqrt2).
  CHECK((dec.right_kets.col(0) - Vector((Vector(2) << 1, 0).finished())).norm() < 1e-12);
  CHECK((dec.right_kets.col(1) - Vector((Vector(2) << s, s).finished())).norm() < 1e-12);
  CHECK((dec.left_bras.col(0) - Vector((Vector(2) << 1, -1).finished())).norm() < 1e-12);
  CHECK((dec.left_bras.col(1) - Vector((Vector(2) << 0, std::sqrt(2.0)).finished())).norm() < 1e-12);

  const Matrix eta = eta_from_decomposition(dec, {1, 1});
  Matrix eta_expected(2, 2);
  eta_expected << 1, -1, -1, 3;
  CHECK((eta - eta_expected).norm() < 1e-12);
  CHECK((H.adjoint() * eta - eta * H).norm() < 1e-12);

  const Matrix eta_inv = eta_inverse_from_decomposition(dec, {1, 1});
  Matrix inv_expected(2, 2);
  inv_expected << 1.5, 0.5, 0.5, 0.5;
  CHECK((eta_inv - inv_expected).norm() < 1e-12);
  CHECK((eta * eta_inv - Matrix::Identity(2, 2)).norm() < 1e-12);

  // The indefinite sign choice still intertwines.
  const Matrix eta_ind = eta_from_decomposition(dec, {1, -1});
  CHECK((H.adjoint() * eta_ind - eta_ind * H).norm() < 1e-12);
  CHECK((eta_ind * eta_inverse_from_decomposition(dec, {1, -1}) - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("hermitian limit") {
  std::mt19937_64 rng(3);
  const Matrix A = random_matrix(rng, 8);
  const Matrix H = A + A.adjoint();
  const FrozenDecomposition dec = decompose(H);
  CHECK(dec.hermitian_input);
  CHECK((dec.left_bras - dec.right_kets).norm() < 1e-10);
  CHECK((eta_from_decomposition(dec) - Matrix::Identity(8, 8)).norm() < 1e-10);
  CHECK((eta_inverse_from_decomposition(dec) - Matrix::Identity(8, 8)).norm() < 1e-10);
  check_decomposition(H, dec);
}

TEST_CASE("random non-normal matrices") {
  std::mt19937_64 rng(5);
  for (Eigen::Index n : {2, 5, 16, 33, 64}) {
    const Matrix H = random_matrix(rng, n);
    check_decomposition(H, decompose(H));
  }
}

TEST_CASE("metric properties on real-spectrum matrices") {
  std::mt19937_64 rng(9);
  for (Eigen::Index n : {3, 8, 20}) {
    const Matrix H = random_real_spectrum(rng, n);
    const FrozenDecomposition dec = decompose(H);
    REQUIRE(dec.real_spectrum());
    check_decomposition(H, dec);
    const Matrix eta = eta_from_decomposition(dec);
    CHECK(hermiticity_residual(eta) < 1e-12 * eta.norm());
    CHECK((H.adjoint() * eta - eta * H).norm() <= 1e-8 * H.norm() * eta.norm());
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(eta).eigenvalues()(0) > 0.0);
    const Matrix eta_inv = eta_inverse_from_decomposition(dec);
    CHECK((eta * eta_inv - Matrix::Identity(n, n)).norm() < 1e-8);
    CHECK((H * eta_inv - eta_inv * H.adjoint()).norm() <= 1e-8 * H.norm() * eta_inv.norm());

    std::vector<int> signs(static_cast<std::size_t>(n), 1);
    for (std::size_t i = 0; i < signs.size(); i += 2) signs[i] = -1;
    const Matrix eta_s = eta_from_decomposition(dec, signs);
    CHECK((H.adjoint() * eta_s - eta_s * H).norm() <= 1e-8 * H.norm() * eta_s.norm());
  }
}

TEST_CASE("phase convention") {
  std::mt19937_64 rng(13);
  const Matrix H = random_matrix(rng, 6);
  const FrozenDecomposition a = decompose(H);
  const FrozenDecomposition b = decompose(H);
  CHECK((a.right_kets - b.right_kets).norm() == 0.0);
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    Eigen::Index imax;
    a.right_kets.col(n).cwiseAbs().maxCoeff(&imax);
    CHECK(std::abs(a.right_kets(imax, n).imag()) < 1e-14);
    CHECK(a.right_kets(imax, n).real() > 0.0);
  }
}

TEST_CASE("error paths") {
  Matrix H = Matrix::Identity(3, 3);
  H(0, 1) = 1.0;  // non-Hermitian, eigenvalue 1 repeated
  try {
    decompose(H);
    FAIL("expected DegenerateSpectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSpectrum);
  }

  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  const FrozenDecomposition dec = decompose(rot);
  CHECK_FALSE(dec.real_spectrum());
  try {
    eta_from_decomposition(dec);
    FAIL("expected ComplexSpectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ComplexSpectrum);
  }
  CHECK_THROWS_AS(eta_from_decomposition(decompose(Matrix::Identity(2, 2)), {1}), Error);
  CHECK_THROWS_AS(eta_from_decomposition(decompose(Matrix::Identity(2, 2)), {1, 2}), Error);
}

TEST_CASE("classify spectrum") {
  Matrix D = Matrix::Zero(3, 3);
  D.diagonal() << 1.0, 2.0, 3.0;
  SpectrumReport r = classify_spectrum(decompose(D));
  CHECK(r.real.size() == 3);
  CHECK(r.conjugate_pairs.empty());
  CHECK_FALSE(r.conjugation_warning);

  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  r = classify_spectrum(decompose(rot));
  CHECK(r.real.empty());
  REQUIRE(r.conjugate_pairs.size() == 1);
  CHECK_FALSE(r.conjugation_warning);

  Matrix C = Matrix::Zero(2, 2);
  C.diagonal() << Complex(0, 1), Complex(0, 2);
  r = classify_spectrum(decompose(C));
  CHECK(r.unpaired_complex.size() == 2);
  CHECK(r.conjugation_warning);
}

TEST_CASE("selective tridiagonal eigenpairs agree with the dense solver") {
  const Eigen::Index n = 60;
  Tridiagonal t;
  t.diagonal.resize(n);
  t.offdiagonal.resize(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) t.diagonal(i) = 2.0 + 0.01 * static_cast<double>(i * i);
  t.offdiagonal.setConstant(-1.0);

  Matrix H = Matrix::Zero(n, n);
  H.diagonal() = t.diagonal.cast<Complex>();
  H.diagonal(1) = t.offdiagonal.cast<Complex>();
  H.diagonal(-1) = t.offdiagonal.cast<Complex>();
  const auto view = as_real_tridiagonal(H);
  REQUIRE(view.has_value());
  CHECK((view->diagonal - t.diagonal).norm() == 0.0);

  const FrozenDecomposition dense = decompose(H);
  const PartialSpectrum ps = tridiagonal_eigenpairs(t, 3, 9);
  for (Eigen::Index k = 0; k < 7; ++k) {
    CHECK(std::abs(ps.values(k) - dense.eigenvalues(3 + k).real()) < 1e-12);
    const double overlap = std::abs(dense.right_kets.col(3 + k).dot(ps.vectors.col(k).cast<Complex>()));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-10));
  }

  Matrix dense_full = H;
  dense_full(0, 5) = 1.0;
  CHECK_FALSE(as_real_tridiagonal(dense_full).has_value());
}
