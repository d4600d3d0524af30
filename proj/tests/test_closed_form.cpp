#include "doctest.h"

#include <cmath>
#include <random>

#include "edkg/closed_form.hpp"
#include "edkg/fixedpoint.hpp"
#include "edkg/types.hpp"

using namespace edkg;
using namespace edkg::closed_form;

TEST_CASE("upper family values") {
  CHECK(spectrum_plus({1.0, 0.0}, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(spectrum_plus({1.0, 3.0}, 0) == doctest::Approx(3.0 + std::sqrt(13.0)).epsilon(1e-15));
  CHECK(spectrum_plus({1.0, 3.0}, 0) == doctest::Approx(6.60555).epsilon(1e-6));
  for (int n = 0; n < 50; ++n) CHECK(spectrum_plus({2.5, -1.0}, n + 1) > spectrum_plus({2.5, -1.0}, n));
}

TEST_CASE("lower family values and absence") {
  const auto pair = spectrum_minus({8.0, 1.0}, 0);
  REQUIRE(pair.has_value());
  CHECK(pair->first == doctest::Approx(1.70711).epsilon(1e-5));
  CHECK(pair->second == doctest::Approx(0.29289).epsilon(1e-5));
  CHECK(pair->first == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-15));
  CHECK(0.5 * (pair->first + pair->second) == doctest::Approx(1.0).epsilon(1e-15));

  for (int n = 0; n < 10; ++n) CHECK_FALSE(spectrum_minus({1.0, 0.0}, n).has_value());

  // Zero radicand: the pair collapses onto E0.
  const auto edge = spectrum_minus({12.0, 1.0}, 1);
  REQUIRE(edge.has_value());
  CHECK(edge->first == 1.0);
  CHECK(edge->second == 1.0);
}

TEST_CASE("highest lower-family index") {
  CHECK(n_max({1.0, 2.0}) == 0);
  CHECK(n_max({12.0, 1.0}) == 1);
  CHECK_FALSE(n_max({1.0, 1.0}).has_value());
  CHECK_FALSE(n_max({3.999, 1.0}).has_value());
  CHECK(n_max({20.0, 1.0}) == 2);
  CHECK(n_max({19.99, -1.0}) == 1);
}

TEST_CASE("full spectrum enumeration") {
  const ClosedSpectrum s = full_spectrum({1.0, 0.0}, 2);
  REQUIRE(s.plus_family.size() == 3);
  CHECK(s.plus_family[0].second == doctest::Approx(2.0));
  CHECK(s.plus_family[1].second == doctest::Approx(std::sqrt(12.0)));
  CHECK(s.plus_family[2].second == doctest::Approx(std::sqrt(20.0)));
  CHECK(s.minus_family.empty());
  CHECK_FALSE(s.n_max.has_value());

  const ClosedSpectrum t = full_spectrum({12.0, 1.0}, 0);
  REQUIRE(t.minus_family.size() == 2);
  CHECK(t.minus_family[0].n == 0);
  CHECK(t.minus_family[1].n == 1);
}

TEST_CASE("random parameters: self-consistency, band and presence") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dA(0.1, 20.0), dE(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const HOParams p{dA(rng), dE(rng)};
    const ClosedSpectrum s = full_spectrum(p, 8);
    CHECK(s.minus_family.empty() == (p.A * p.E0 * p.E0 < 4.0));
    for (const auto& [n, e] : s.plus_family) CHECK(quadratic_residual(p, n, e, +1) <= 1e-12);
    for (const auto& m : s.minus_family) {
      CHECK(quadratic_residual(p, m.n, m.upper, -1) <= 1e-12);
      CHECK(quadratic_residual(p, m.n, m.lower, -1) <= 1e-12);
      CHECK(std::abs(m.upper - p.E0) <= std::abs(p.E0));
      CHECK(std::abs(m.lower - p.E0) <= std::abs(p.E0));
    }
    const auto nm = n_max(p);
    for (int n = 0; n < 40; ++n) {
      CHECK(spectrum_minus(p, n).has_value() == (nm.has_value() && n <= *nm));
    }
  }
}

TEST_CASE("lower-family count increases by one at each threshold") {
  const double E0 = 1.5;
  for (int n = 0; n < 5; ++n) {
    const double threshold = (8.0 * n + 4.0) / (E0 * E0);
    const auto below = full_spectrum({threshold * (1.0 - 1e-9), E0}, 0).minus_family.size();
    const auto above = full_spectrum({threshold * (1.0 + 1e-9), E0}, 0).minus_family.size();
    CHECK(below == static_cast<std::size_t>(n));
    CHECK(above == static_cast<std::size_t>(n + 1));
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(spectrum_plus({0.0, 1.0}, 0), Error);
  CHECK_THROWS_AS(spectrum_plus({1.0, 1.0}, -1), Error);
  CHECK_THROWS_AS(full_spectrum({1.0, 1.0}, -1), Error);
}

TEST_CASE("full-line conventions") {
  const HOParams p{5.0, 1.0};
  const HOParams q = full_line_equivalent(p);
  CHECK(q.A == 1.25);
  CHECK(q.E0 == 2.0);
  // E A |E - E0| = 2n + 1 on the full line.
  for (int n = 0; n < 4; ++n) {
    const double e = full_line_plus(p, n);
    CHECK(e == doctest::Approx(0.5 * spectrum_plus(p, n)).epsilon(1e-15));
    CHECK(e * p.A * std::abs(e - p.E0) == doctest::Approx(2.0 * n + 1.0).epsilon(1e-12));
    CHECK(full_line_plus(q, n) * 2.0 == doctest::Approx(spectrum_plus(q, n)));
    CHECK(spectrum_plus(p, n) == doctest::Approx(2.0 * full_line_plus(p, n)));
  }
  const auto m = full_line_minus(p, 0);
  REQUIRE(m.has_value());
  CHECK(m->first * p.A * std::abs(m->first - p.E0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(full_line_minus({5.0, -1.0}, 0).has_value());
}

TEST_CASE("discretized full-line oscillator matches the halved closed form") {
  // Same parameters on the full line: energies are half of the closed form.
  const HOParams p{1.0, 3.0};
  const Grid g(-12.0, 12.0, 300);
  const CollectResult r = collect_physical(HOQuadratic{p.A, p.E0}, g, {0}, {{p.E0 + 0.05, 10.0}},
                                           ProblemKind::Schrodinger);
  REQUIRE(r.levels.size() == 1);
  CHECK(std::abs(r.levels[0].energy - full_line_plus(p, 0)) < 1e-3 * full_line_plus(p, 0));
  CHECK(std::abs(r.levels[0].energy - spectrum_plus(p, 0)) > 1.0);
}
