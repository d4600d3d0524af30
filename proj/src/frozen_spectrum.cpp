#include "edkg/frozen_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace edkg {
namespace {

bool is_real_value(Complex e, double tol_real) {
  return std::abs(e.imag()) <= tol_real * (1.0 + std::abs(e));
}

// First component within a relative 1e-8 of the largest magnitude, so
// near-ties between mirror components resolve to the lower index.
Complex phase_anchor(const Eigen::Ref<const Vector>& v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= (1.0 - 1e-8) * vmax) return v(i);
  }
  return v(0);
}

void fix_phase(FrozenDecomposition& dec) {
  for (Eigen::Index n = 0; n < dec.size(); ++n) {
    const Complex anchor = phase_anchor(dec.right_kets.col(n));
    if (std::abs(anchor) == 0.0) continue;
    const Complex p = std::conj(anchor) / std::abs(anchor);
    dec.right_kets.col(n) *= p;
    dec.left_bras.col(n) *= p;
  }
}

void fill_diagnostics(FrozenDecomposition& dec, double tol_real) {
  const Eigen::Index n = dec.size();
  const Matrix gram = dec.left_bras.adjoint() * dec.right_kets;
  dec.biorth_residual = (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  dec.completeness_residual =
      (dec.right_kets * dec.left_bras.adjoint() - Matrix::Identity(n, n)).norm();
  dec.reality_flags.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    dec.reality_flags[static_cast<std::size_t>(k)] = is_real_value(dec.eigenvalues(k), tol_real);
  }
}

FrozenDecomposition decompose_hermitian(const Matrix& H, const DecomposeOptions& options) {
  FrozenDecomposition dec;
  dec.hermitian_input = true;
  if (H.imag().isZero(0.0)) {
    const Eigen::MatrixXd Hr = H.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hr);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::DegenerateSpectrum, "symmetric eigensolver did not converge");
    }
    dec.eigenvalues = es.eigenvalues().cast<Complex>();
    dec.right_kets = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::DegenerateSpectrum, "Hermitian eigensolver did not converge");
    }
    dec.eigenvalues = es.eigenvalues().cast<Complex>();
    dec.right_kets = es.eigenvectors();
  }
  dec.left_bras = dec.right_kets;
  fix_phase(dec);
  fill_diagnostics(dec, options.tol_real);
  return dec;
}

std::vector<Eigen::Index> sorted_order(const Vector& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });
  return order;
}

FrozenDecomposition decompose_general(const Matrix& H, const DecomposeOptions& options) {
  const Eigen::Index n = H.rows();
  const double scale = H.norm();

  Eigen::ComplexEigenSolver<Matrix> right(H);
  Eigen::ComplexEigenSolver<Matrix> left(H.adjoint());
  if (right.info() != Eigen::Success || left.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateSpectrum, "complex eigensolver did not converge");
  }

  const Vector& values = right.eigenvalues();
  const auto order = sorted_order(values);

  const double tol_deg = options.degeneracy_rel * scale;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double gap = std::abs(values(a) - values(b));
      if (gap < tol_deg) {
        throw Error(ErrorKind::DegenerateSpectrum,
                    fmt::format("eigenvalues ({:.6e},{:.6e}) and ({:.6e},{:.6e}) are {:.3e} apart",
                                values(a).real(), values(a).imag(), values(b).real(),
                                values(b).imag(), gap));
      }
    }
  }

  FrozenDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.right_kets.resize(n, n);
  dec.left_bras.resize(n, n);

  // Greedy nearest-conjugate matching of the H^dagger spectrum onto the H spectrum.
  const double tol_pair = options.pair_rel * scale;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    const Complex target = values(src);
    Eigen::Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(std::conj(left.eigenvalues()(j)) - target);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best < 0 || best_dist > tol_pair) {
      throw Error(ErrorKind::PairingFailure,
                  fmt::format("no left partner for eigenvalue ({:.6e},{:.6e}); nearest at {:.3e}",
                              target.real(), target.imag(), best_dist));
    }
    used[static_cast<std::size_t>(best)] = true;

    Vector r = right.eigenvectors().col(src);
    r.normalize();
    Vector l = left.eigenvectors().col(best);
    const Complex s = l.dot(r);
    if (std::abs(s) <= std::numeric_limits<double>::epsilon() * l.norm() * r.norm()) {
      throw Error(ErrorKind::PairingFailure,
                  fmt::format("left and right vectors of eigenvalue ({:.6e},{:.6e}) are orthogonal",
                              target.real(), target.imag()));
    }
    l /= std::conj(s);
    dec.eigenvalues(k) = target;
    dec.right_kets.col(k) = r;
    dec.left_bras.col(k) = l;
  }

  fix_phase(dec);
  fill_diagnostics(dec, options.tol_real);
  return dec;
}

std::vector<int> all_plus(Eigen::Index n) { return std::vector<int>(static_cast<std::size_t>(n), 1); }

Eigen::VectorXd checked_signs(const FrozenDecomposition& dec, const std::vector<int>& signs) {
  if (static_cast<Eigen::Index>(signs.size()) != dec.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("{} signs for {} eigenvalues", signs.size(), dec.size()));
  }
  if (!dec.real_spectrum()) {
    throw Error(ErrorKind::ComplexSpectrum, "metric expansion requested for a complex spectrum");
  }
  Eigen::VectorXd s(dec.size());
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) {
      throw Error(ErrorKind::InvalidArgument, "metric signs must be +1 or -1");
    }
    s(static_cast<Eigen::Index>(i)) = signs[i];
  }
  return s;
}

}  // namespace

bool FrozenDecomposition::real_spectrum() const {
  return std::all_of(reality_flags.begin(), reality_flags.end(), [](bool f) { return f; });
}

FrozenDecomposition decompose(const Matrix& H, const DecomposeOptions& options) {
  if (H.rows() != H.cols() || H.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "decompose needs a non-empty square matrix");
  }
  if (!H.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  const double scale = H.norm();
  FrozenDecomposition dec = hermiticity_residual(H) <= 1e-14 * scale
                                ? decompose_hermitian(H, options)
                                : decompose_general(H, options);
  dec.operator_norm = scale;
  return dec;
}

FrozenDecomposition decompose_at(const Matrix& H, double z, const DecomposeOptions& options) {
  FrozenDecomposition dec = decompose(H, options);
  dec.z = z;
  return dec;
}

Matrix eta_from_decomposition(const FrozenDecomposition& dec, const std::vector<int>& signs) {
  const Eigen::VectorXd s = checked_signs(dec, signs);
  return dec.left_bras * s.cast<Complex>().asDiagonal() * dec.left_bras.adjoint();
}

Matrix eta_from_decomposition(const FrozenDecomposition& dec) {
  return eta_from_decomposition(dec, all_plus(dec.size()));
}

Matrix eta_inverse_from_decomposition(const FrozenDecomposition& dec,
                                      const std::vector<int>& signs) {
  const Eigen::VectorXd s = checked_signs(dec, signs);
  return dec.right_kets * s.cast<Complex>().asDiagonal() * dec.right_kets.adjoint();
}

Matrix eta_inverse_from_decomposition(const FrozenDecomposition& dec) {
  return eta_inverse_from_decomposition(dec, all_plus(dec.size()));
}

Matrix reconstruct(const FrozenDecomposition& dec) {
  return dec.right_kets * dec.eigenvalues.asDiagonal() * dec.left_bras.adjoint();
}

SpectrumReport classify_spectrum(const FrozenDecomposition& dec, double tol_real) {
  SpectrumReport report;
  const Eigen::Index n = dec.size();
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex e = dec.eigenvalues(i);
    if (is_real_value(e, tol_real)) {
      report.real.push_back(i);
      taken[static_cast<std::size_t>(i)] = true;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (taken[static_cast<std::size_t>(i)]) continue;
    const Complex e = dec.eigenvalues(i);
    Eigen::Index partner = -1;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      if (std::abs(dec.eigenvalues(j) - std::conj(e)) <= tol_real * (1.0 + std::abs(e))) {
        partner = j;
        break;
      }
    }
    taken[static_cast<std::size_t>(i)] = true;
    if (partner >= 0) {
      taken[static_cast<std::size_t>(partner)] = true;
      report.conjugate_pairs.emplace_back(i, partner);
    } else {
      report.unpaired_complex.push_back(i);
    }
  }
  report.conjugation_warning = !report.unpaired_complex.empty();
  return report;
}

}  // namespace edkg

namespace edkg {
namespace {

// Gaussian elimination with partial pivoting for (T - shift I) x = rhs, in the
// layout of LAPACK gttrf/gtts2 (second superdiagonal created by row swaps).
// Number of eigenvalues of the symmetric tridiagonal t strictly below x.
Eigen::Index sturm_count(const Tridiagonal& t, double x, double pivmin) {
  Eigen::Index count = 0;
  double q = 1.0;
  for (Eigen::Index i = 0; i < t.diagonal.size(); ++i) {
    const double coupling = i > 0 ? t.offdiagonal(i - 1) * t.offdiagonal(i - 1) / q : 0.0;
    q = t.diagonal(i) - x - coupling;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const Tridiagonal& t, double shift)
      : dl_(t.offdiagonal), d_(t.diagonal.array() - shift), du_(t.offdiagonal),
        du2_(RealVector::Zero(std::max<Eigen::Index>(t.diagonal.size() - 2, 0))),
        swap_(static_cast<std::size_t>(std::max<Eigen::Index>(t.diagonal.size() - 1, 0)), false) {
    const Eigen::Index n = d_.size();
    const double tiny = std::numeric_limits<double>::epsilon() *
                        std::max(1.0, t.diagonal.cwiseAbs().maxCoeff() +
                                          2.0 * (n > 1 ? t.offdiagonal.cwiseAbs().maxCoeff() : 0.0));
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d_(i)) >= std::abs(dl_(i))) {
        if (d_(i) == 0.0) d_(i) = tiny;
        const double fact = dl_(i) / d_(i);
        dl_(i) = fact;
        d_(i + 1) -= fact * du_(i);
      } else {
        const double fact = d_(i) / dl_(i);
        d_(i) = dl_(i);
        dl_(i) = fact;
        const double temp = du_(i);
        du_(i) = d_(i + 1);
        d_(i + 1) = temp - fact * d_(i + 1);
        if (i + 2 < n) {
          du2_(i) = du_(i + 1);
          du_(i + 1) = -fact * du_(i + 1);
        }
        swap_[static_cast<std::size_t>(i)] = true;
      }
    }
    if (d_(n - 1) == 0.0) d_(n - 1) = tiny;
  }

  void solve_in_place(RealVector& b) const {
    const Eigen::Index n = d_.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (!swap_[static_cast<std::size_t>(i)]) {
        b(i + 1) -= dl_(i) * b(i);
      } else {
        const double temp = b(i);
        b(i) = b(i + 1);
        b(i + 1) = temp - dl_(i) * b(i);
      }
    }
    b(n - 1) /= d_(n - 1);
    if (n > 1) b(n - 2) = (b(n - 2) - du_(n - 2) * b(n - 1)) / d_(n - 2);
    for (Eigen::Index i = n - 3; i >= 0; --i) {
      b(i) = (b(i) - du_(i) * b(i + 1) - du2_(i) * b(i + 2)) / d_(i);
    }
  }

 private:
  RealVector dl_, d_, du_, du2_;
  std::vector<bool> swap_;
};

}  // namespace

std::optional<Tridiagonal> as_real_tridiagonal(const Matrix& H) {
  if (H.rows() != H.cols() || H.rows() < 2) return std::nullopt;
  const Eigen::Index n = H.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex v = H(i, j);
      if (v.imag() != 0.0) return std::nullopt;
      if (std::abs(i - j) > 1 && v.real() != 0.0) return std::nullopt;
    }
  }
  Tridiagonal t;
  t.diagonal = H.diagonal().real();
  t.offdiagonal = H.diagonal(-1).real();
  if (t.offdiagonal != RealVector(H.diagonal(1).real())) return std::nullopt;
  return t;
}

PartialSpectrum tridiagonal_eigenpairs(const Tridiagonal& t, Eigen::Index first,
                                       Eigen::Index last) {
  const Eigen::Index n = t.diagonal.size();
  if (first < 0 || last >= n || first > last || t.offdiagonal.size() != n - 1) {
    throw Error(ErrorKind::InvalidArgument, "invalid tridiagonal eigenpair selection");
  }
  PartialSpectrum out;
  out.first = first;
  const Eigen::Index count = last - first + 1;
  out.values.resize(count);
  out.vectors.resize(n, count);

  // Gershgorin interval, then bisection on the Sturm count for each selected index.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(t.offdiagonal(i - 1)) : 0.0) +
                          (i + 1 < n ? std::abs(t.offdiagonal(i)) : 0.0);
    lo = std::min(lo, t.diagonal(i) - radius);
    hi = std::max(hi, t.diagonal(i) + radius);
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  const double pivmin = std::numeric_limits<double>::min() * scale * scale;
  for (Eigen::Index k = 0; k < count; ++k) {
    const Eigen::Index target = first + k;
    double a = k > 0 ? out.values(k - 1) - 2.0 * std::numeric_limits<double>::epsilon() * scale : lo;
    double b = hi;
    a = std::max(a, lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(t, mid, pivmin) > target) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out.values(k) = 0.5 * (a + b);
  }

  for (Eigen::Index k = 0; k < count; ++k) {
    const ShiftedTridiagonalLU lu(t, out.values(k));
    // Deterministic start vector with components along every eigenvector.
    RealVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
    for (int it = 0; it < 3; ++it) {
      lu.solve_in_place(x);
      // Close neighbours share the near-null space; keep the selection orthogonal.
      for (Eigen::Index p = 0; p < k; ++p) {
        if (std::abs(out.values(p) - out.values(k)) < 1e-6 * scale) {
          x -= out.vectors.col(p).dot(x) * out.vectors.col(p);
        }
      }
      x.normalize();
    }
    Eigen::Index anchor = 0;
    const double xmax = x.cwiseAbs().maxCoeff();
    while (std::abs(x(anchor)) < (1.0 - 1e-8) * xmax) ++anchor;
    if (x(anchor) < 0.0) x = -x;
    out.vectors.col(k) = x;
  }
  return out;
}

}  // namespace edkg
