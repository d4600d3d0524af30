#include "edkg/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edkg/types.hpp"

namespace edkg::closed_form {
namespace {

void check(const HOParams& p, int n) {
  if (!(p.A > 0.0)) throw Error(ErrorKind::InvalidArgument, "closed form requires A > 0");
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level index must be non-negative");
}

double level_term(const HOParams& p, int n) { return (8.0 * n + 4.0) / p.A; }

}  // namespace

double spectrum_plus(const HOParams& p, int n) {
  check(p, n);
  return p.E0 + std::sqrt(p.E0 * p.E0 + level_term(p, n));
}

std::optional<std::pair<double, double>> spectrum_minus(const HOParams& p, int n) {
  check(p, n);
  const double radicand = p.E0 * p.E0 - level_term(p, n);
  if (radicand < 0.0) return std::nullopt;
  const double root = std::sqrt(radicand);
  return std::make_pair(p.E0 + root, p.E0 - root);
}

std::optional<int> n_max(const HOParams& p) {
  check(p, 0);
  const double s = p.A * p.E0 * p.E0;
  if (s < 4.0) return std::nullopt;
  return static_cast<int>(std::floor((s - 4.0) / 8.0));
}

ClosedSpectrum full_spectrum(const HOParams& p, int n_cut) {
  if (n_cut < 0) throw Error(ErrorKind::InvalidArgument, "n_cut must be non-negative");
  ClosedSpectrum out;
  for (int n = 0; n <= n_cut; ++n) out.plus_family.emplace_back(n, spectrum_plus(p, n));
  out.n_max = n_max(p);
  if (out.n_max) {
    for (int n = 0; n <= *out.n_max; ++n) {
      // floor() and the radicand test can disagree by one ulp at the exact boundary.
      if (auto pair = spectrum_minus(p, n)) out.minus_family.push_back({n, pair->first, pair->second});
    }
  }
  return out;
}

double quadratic_residual(const HOParams& p, int n, double E, int sign) {
  const double lhs = (E - p.E0) * (E - p.E0);
  const double rhs = p.E0 * p.E0 + sign * level_term(p, n);
  const double scale = std::max({std::abs(lhs), p.E0 * p.E0, level_term(p, n)});
  return std::abs(lhs - rhs) / scale;
}

HOParams full_line_equivalent(const HOParams& p) { return {p.A / 4.0, 2.0 * p.E0}; }

double full_line_plus(const HOParams& p, int n) { return 0.5 * spectrum_plus(p, n); }

std::optional<std::pair<double, double>> full_line_minus(const HOParams& p, int n) {
  // Fixed points of E A |E - E0| = 2n + 1 are positive, so the lower family needs E0 > 0.
  if (p.E0 <= 0.0) return std::nullopt;
  auto pair = spectrum_minus(p, n);
  if (!pair) return std::nullopt;
  return std::make_pair(0.5 * pair->first, 0.5 * pair->second);
}

}  // namespace edkg::closed_form
