#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace edkg::closed_form {

/// Oscillator with the energy-dependent mass 2m(E) = A^2 (E - E0)^2.
struct HOParams {
  double A;
  double E0;
};

struct MinusLevel {
  int n;
  double upper;  ///< E0 + sqrt(E0^2 - (8n+4)/A)
  double lower;  ///< E0 - sqrt(E0^2 - (8n+4)/A)
};

struct ClosedSpectrum {
  std::vector<std::pair<int, double>> plus_family;
  std::vector<MinusLevel> minus_family;
  std::optional<int> n_max;
};

/// E0 + sqrt(E0^2 + (8n+4)/A).
double spectrum_plus(const HOParams& p, int n);

/// E0 +/- sqrt(E0^2 - (8n+4)/A), absent when the radicand is negative.
std::optional<std::pair<double, double>> spectrum_minus(const HOParams& p, int n);

/// floor((A E0^2 - 4) / 8), absent when A E0^2 < 4.
std::optional<int> n_max(const HOParams& p);

ClosedSpectrum full_spectrum(const HOParams& p, int n_cut);

/// Residual of (E - E0)^2 = E0^2 + sign (8n+4)/A, relative to the larger side.
double quadratic_residual(const HOParams& p, int n, double E, int sign);

/// Parameters for which the full-line finite-difference oscillator reproduces
/// these closed-form energies exactly: the full-line problem with (A, E0)
/// gives half of the closed-form energies, so (A/4, 2 E0) gives them in full.
HOParams full_line_equivalent(const HOParams& p);

/// Full-line energies for the given branch n: roots of E A |E - E0| = 2n + 1.
/// These are exactly spectrum_plus / spectrum_minus divided by two (the lower
/// family only exists for E0 > 0).
double full_line_plus(const HOParams& p, int n);
std::optional<std::pair<double, double>> full_line_minus(const HOParams& p, int n);

}  // namespace edkg::closed_form
