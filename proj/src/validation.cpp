#include "edkg/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include <fmt/format.h>

#include "edkg/closed_form.hpp"
#include "edkg/evolution.hpp"
#include "edkg/physical_basis.hpp"

namespace edkg::validation {
namespace {

std::string sci(double v) { return fmt::format("{:.16e}", v); }

Matrix random_gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Runs `body`, which fills pass/detail, and applies the runtime limit.
CriterionResult timed(int id, std::string name, double limit,
                      const std::function<void(CriterionResult&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.limit_seconds = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = fmt::format("error: {}", e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds >= limit) {
    r.pass = false;
    r.detail += fmt::format(" runtime limit {} s exceeded", limit);
  }
  return r;
}

PhysicalLevel make_level(int n, double energy, Vector ket, Vector left) {
  PhysicalLevel lv;
  lv.n = n;
  lv.energy = energy;
  lv.right_ket = std::move(ket);
  lv.left_bra = std::move(left);
  return lv;
}

}  // namespace

std::vector<PhysicalLevel> two_level_fixture() {
  const double s = 1.0 / std::sqrt(2.0);
  Vector r1(3), r2(3), l1(3), l2(3);
  r1 << 1.0, 0.0, 0.0;
  r2 << s, s, 0.0;
  l1 << 1.0, 0.2, 0.0;                    // <l1|r1> = 1, <l1|r2> = 1.2/sqrt2
  l2 << 0.0, std::sqrt(2.0), Complex(0.0, 0.3);  // <l2|r2> = 1, <l2|r1> = 0
  return {make_level(0, 1.5, r1, l1), make_level(1, 2.5, r2, l2)};
}

std::vector<PhysicalLevel> duplicated_level_fixture() {
  auto levels = two_level_fixture();
  levels[1] = levels[0];
  levels[1].n = 1;
  return levels;
}

CriterionResult closed_form_consistency(const Options& options) {
  return timed(1, "closed-form self-consistency", 1.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist_A(0.1, 20.0);
    std::uniform_real_distribution<double> dist_E0(-5.0, 5.0);
    double worst = 0.0;
    int presence_mismatch = 0;
    long values = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const closed_form::HOParams p{dist_A(rng), dist_E0(rng)};
      const auto nmax = closed_form::n_max(p);
      const int n_hi = std::max(12, (nmax ? *nmax : 0) + 3);
      const auto spec = closed_form::full_spectrum(p, n_hi);
      for (const auto& [n, e] : spec.plus_family) {
        worst = std::max(worst, closed_form::quadratic_residual(p, n, e, +1));
        ++values;
      }
      for (const auto& m : spec.minus_family) {
        worst = std::max(worst, closed_form::quadratic_residual(p, m.n, m.upper, -1));
        worst = std::max(worst, closed_form::quadratic_residual(p, m.n, m.lower, -1));
        values += 2;
      }
      for (int n = 0; n <= n_hi; ++n) {
        const bool present = closed_form::spectrum_minus(p, n).has_value();
        const bool expected = nmax.has_value() && n <= *nmax;
        if (present != expected) ++presence_mismatch;
      }
    }
    r.pass = worst <= 1e-12 && presence_mismatch == 0;
    r.detail = fmt::format("values={} max_rel_residual={} presence_mismatches={}", values,
                           sci(worst), presence_mismatch);
  });
}

CriterionResult emergence_rule(const Options&) {
  return timed(2, "emergence rule", 1.0, [&](CriterionResult& r) {
    const double E0 = 1.0;
    auto count = [&](double A) {
      return static_cast<int>(closed_form::full_spectrum({A, E0}, 0).minus_family.size());
    };
    bool ok = true;
    std::string steps;
    for (int n = 0; n <= 3; ++n) {
      const double threshold = (8.0 * n + 4.0) / (E0 * E0);
      const int below = count(threshold * (1.0 - 1e-9));
      const int above = count(threshold * (1.0 + 1e-9));
      const int at = count(threshold);
      ok = ok && below == n && above == n + 1 && at == n + 1;
      steps += fmt::format(" A={}:{}->{}", threshold, below, above);
    }
    // Between thresholds the count only ever moves up by one, and only across one.
    int previous = count(0.5);
    int jumps = 0;
    for (int k = 1; k <= 3950; ++k) {
      const double A = 0.5 + 0.01 * k;
      const int c = count(A);
      if (c != previous) {
        ++jumps;
        const double threshold = (8.0 * previous + 4.0) / (E0 * E0);
        ok = ok && c == previous + 1 && A >= threshold && A - 0.01 < threshold;
      }
      previous = c;
    }
    ok = ok && jumps == 5;  // thresholds 4, 12, 20, 28, 36 inside (0.5, 40]
    r.pass = ok;
    r.detail = fmt::format("counts{} sweep_jumps={}", steps, jumps);
  });
}

CriterionResult numeric_vs_closed_form(const Options& options) {
  return timed(3, "numeric vs closed form", 60.0, [&](CriterionResult& r) {
    // Closed-form parameters and the full-line parameters reproducing them.
    const closed_form::HOParams target{5.0, 1.0};
    const closed_form::HOParams eq = closed_form::full_line_equivalent(target);
    const MassModel model = HOQuadratic{eq.A, eq.E0};
    const std::vector<std::pair<double, double>> windows = {{0.05, eq.E0 - 0.05},
                                                            {eq.E0 + 0.05, 8.0}};
    const auto minus = closed_form::spectrum_minus(target, 0);
    // (n, j) -> closed-form energy; the equivalent parameters reproduce it directly
    const std::map<std::pair<int, int>, double> exact = {
        {{0, 0}, minus->second},
        {{0, 1}, minus->first},
        {{0, 2}, closed_form::spectrum_plus(target, 0)},
        {{1, 0}, closed_form::spectrum_plus(target, 1)},
        {{2, 0}, closed_form::spectrum_plus(target, 2)},
    };

    const Eigen::Index finest = options.finest_points;
    const std::vector<Eigen::Index> sizes = {finest / 4, finest / 2, finest};
    std::vector<std::map<std::pair<int, int>, double>> numeric;
    for (const Eigen::Index n : sizes) {
      const Grid grid(-12.0, 12.0, n);
      const CollectResult res =
          collect_physical(model, grid, {0, 1, 2}, windows, ProblemKind::Schrodinger, 64);
      std::map<std::pair<int, int>, double> e;
      for (const auto& lv : res.levels) e[{lv.n, lv.j}] = lv.energy;
      numeric.push_back(std::move(e));
    }

    bool ok = true;
    double worst_rel = 0.0;
    double min_order = 1e300, max_order = -1e300;
    const double h0 = 24.0 / static_cast<double>(sizes[0] - 1);
    const double h1 = 24.0 / static_cast<double>(sizes[1] - 1);
    const double h2 = 24.0 / static_cast<double>(sizes[2] - 1);
    bool counts_match = true;
    for (const auto& level : numeric) counts_match = counts_match && level.size() == exact.size();
    ok = counts_match;
    if (counts_match) {
      for (const auto& [key, value] : exact) {
        const double e0 = std::abs(numeric[0].at(key) - value);
        const double e1 = std::abs(numeric[1].at(key) - value);
        const double e2 = std::abs(numeric[2].at(key) - value);
        worst_rel = std::max(worst_rel, e2 / std::abs(value));
        const double p_coarse = std::log(e0 / e1) / std::log(h0 / h1);
        const double p_fine = std::log(e1 / e2) / std::log(h1 / h2);
        min_order = std::min({min_order, p_coarse, p_fine});
        max_order = std::max({max_order, p_coarse, p_fine});
      }
      ok = worst_rel <= 1e-3 && min_order >= 1.8 && max_order <= 2.2;
    }

    // Fitted-form check on the upper family of the finest grid:
    // E^2 = alpha E + beta + gamma n, i.e. (E - c1 E0)^2 = c2 + (a + b n)/A.
    double r2 = 0.0;
    {
      const Grid grid(-12.0, 12.0, finest);
      const CollectResult res = collect_physical(model, grid, {0, 1, 2, 3, 4, 5},
                                                 {windows[1]}, ProblemKind::Schrodinger, 64);
      const auto m = static_cast<Eigen::Index>(res.levels.size());
      Eigen::MatrixXd X(m, 3);
      Eigen::VectorXd y(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto& lv = res.levels[static_cast<std::size_t>(i)];
        X(i, 0) = lv.energy;
        X(i, 1) = 1.0;
        X(i, 2) = lv.n;
        y(i) = lv.energy * lv.energy;
      }
      if (m >= 5) {
        const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);
        const double ss_res = (X * coef - y).squaredNorm();
        const double ss_tot = (y.array() - y.mean()).square().sum();
        r2 = 1.0 - ss_res / ss_tot;
      }
      ok = ok && m == 6 && r2 > 0.9999;
    }

    std::string counts;
    for (const auto& level : numeric) counts += fmt::format("{}{}", counts.empty() ? "" : "/", level.size());
    r.pass = ok;
    if (!counts_match) {
      r.detail = fmt::format("levels={} (expected {} on every grid) fit_R2={}", counts, exact.size(), sci(r2));
    } else {
      r.detail = fmt::format("levels={} max_rel_err_finest={} order_range=[{}, {}] fit_R2={}", counts,
                             sci(worst_rel), sci(min_order), sci(max_order), sci(r2));
    }
  });
}

CriterionResult biorthogonal_machinery(const Options& options) {
  return timed(4, "bi-orthogonal machinery", 30.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(options.seed + 4);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    double worst_biorth = 0.0, worst_complete = 0.0, worst_recon = 0.0, worst_eta = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 2 + (trial * 62) / 99;
      const Matrix V = random_gaussian(rng, n) / std::sqrt(static_cast<double>(n)) +
                       2.0 * Matrix::Identity(n, n);
      Vector d(n);
      for (Eigen::Index k = 0; k < n; ++k) d(k) = static_cast<double>(k) - 0.5 * n + jitter(rng);
      const Matrix H = V * d.asDiagonal() * V.inverse();
      const FrozenDecomposition dec = decompose(H);
      const Matrix eta = eta_from_decomposition(dec);
      worst_biorth = std::max(worst_biorth, dec.biorth_residual);
      worst_complete = std::max(worst_complete, dec.completeness_residual);
      worst_recon = std::max(worst_recon, (reconstruct(dec) - H).norm() / H.norm());
      worst_eta = std::max(worst_eta, (H.adjoint() * eta - eta * H).norm() / (H.norm() * eta.norm()));
    }
    r.pass = worst_biorth <= 1e-8 && worst_complete <= 1e-8 && worst_recon <= 1e-8 &&
             worst_eta <= 1e-8;
    r.detail = fmt::format("biorth={} completeness={} reconstruction={} eta_intertwining={}",
                           sci(worst_biorth), sci(worst_complete), sci(worst_recon),
                           sci(worst_eta));
  });
}

CriterionResult k_l_contract(const Options&) {
  return timed(5, "K/L contract", 5.0, [&](CriterionResult& r) {
    // Energy-independent limit on a complete level set.
    const Grid grid(-4.0, 4.0, 16);
    const MassModel model = ConstantMass{0.5};
    const Matrix H = build_schrodinger(grid, model, 0.0);
    std::vector<int> all(16);
    for (int i = 0; i < 16; ++i) all[static_cast<std::size_t>(i)] = i;
    TraceOptions opt;
    opt.refine_tol = 1e-12;
    const double top = decompose(H).eigenvalues(15).real();
    const CollectResult levels =
        collect_physical(model, grid, all, {{-1.0, top + 1.0}}, ProblemKind::Schrodinger, 16, opt);
    const PhysicalBasis full = build_basis(levels.levels);
    const double dK = (build_K(full) - H).norm();
    const double dL = (build_L(full) - H).norm();

    const PhysicalBasis two = build_basis(two_level_fixture());
    const Matrix K = build_K(two);
    const Matrix L = build_L(two);
    double right_action = 0.0, left_action = 0.0;
    for (Eigen::Index a = 0; a < two.size(); ++a) {
      const double E = two.energies(a);
      right_action = std::max(right_action, (K * two.kets.col(a) - E * two.kets.col(a)).norm());
      left_action = std::max(
          left_action, (two.lefts.col(a).adjoint() * L - E * two.lefts.col(a).adjoint()).norm());
    }
    const MetricSuite metrics = build_metrics(two, K, L);
    const double k_minus_l = (K - L).norm();
    r.pass = levels.levels.size() == 16 && dK < 1e-8 && dL < 1e-8 && right_action < 1e-10 &&
             left_action < 1e-10 && metrics.residual_K < 1e-9 && metrics.residual_L < 1e-9 &&
             k_minus_l > 1e-3;
    r.detail = fmt::format(
        "|K-H|={} |L-H|={} right_action={} left_action={} mu_residual={} nu_residual={} |K-L|={}",
        sci(dK), sci(dL), sci(right_action), sci(left_action), sci(metrics.residual_K),
        sci(metrics.residual_L), sci(k_minus_l));
  });
}

CriterionResult fv_square_law(const Options& options) {
  return timed(6, "FV square law", 5.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(options.seed + 6);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 1 + trial % 16;
      const Matrix H = random_gaussian(rng, n);
      const Vector lambda = Eigen::ComplexEigenSolver<Matrix>(H, false).eigenvalues();
      const Vector e = Eigen::ComplexEigenSolver<Matrix>(assemble_fv(H).h_sr, false).eigenvalues();
      const double scale = H.norm();
      for (Eigen::Index k = 0; k < e.size(); ++k) {
        const double square = (lambda.array() - e(k) * e(k)).abs().minCoeff();
        const double mirror = (e.array() + e(k)).abs().minCoeff();
        worst = std::max(worst, std::max(square, mirror) / scale);
      }
    }
    r.pass = worst <= 1e-8;
    r.detail = fmt::format("max_rel_residual={}", sci(worst));
  });
}

CriterionResult pseudo_unitarity(const Options&) {
  return timed(7, "pseudo-unitarity", 10.0, [&](CriterionResult& r) {
    const Grid grid(-10.0, 10.0, 101);
    const Matrix H = build_kleingordon(grid, ConstantMass{1.0}, 0.0);
    const FVSystem fv = assemble_fv(H);
    const Vector g = gaussian(grid, -2.0, 1.0, 1.5);
    const FVState initial{g, g, 0.0};
    const Trajectory traj = evolve(fv, initial, 10.0, 200);
    const ConservationReport rep = conservation_report(traj, fv.eta_sr, fv);
    const Matrix identity = Matrix::Identity(2 * grid.size(), 2 * grid.size());
    double euclid_min = 1e300, euclid_max = 0.0;
    for (const auto& s : traj.states) {
      const double v = pseudo_norm(s, identity).value;
      euclid_min = std::min(euclid_min, v);
      euclid_max = std::max(euclid_max, v);
    }
    const double euclid_variation = (euclid_max - euclid_min) / pseudo_norm(initial, identity).value;
    r.pass = traj.states.size() == 201 && rep.pass && rep.max_relative_drift <= 1e-8 &&
             euclid_variation > 1e-3;
    r.detail = fmt::format("pseudo_norm_drift={} euclidean_variation={} intertwining={}",
                           sci(rep.max_relative_drift), sci(euclid_variation),
                           sci(rep.intertwining));
  });
}

std::vector<CriterionResult> run_criteria(const Options& options) {
  return {closed_form_consistency(options), emergence_rule(options),
          numeric_vs_closed_form(options),  biorthogonal_machinery(options),
          k_l_contract(options),            fv_square_law(options),
          pseudo_unitarity(options)};
}

std::vector<CriterionResult> run_all(const Options& options) {
  std::vector<CriterionResult> first = run_criteria(options);
  const std::string report_a = format_report(first);
  CriterionResult det = timed(8, "determinism", 1e9, [&](CriterionResult& r) {
    const std::string report_b = format_report(run_criteria(options));
    r.pass = report_a == report_b;
    r.detail = fmt::format("report_bytes={} identical={}", report_a.size(), r.pass);
  });
  first.push_back(std::move(det));
  return first;
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += fmt::format("[{}] criterion {} {}: {}\n", r.pass ? "PASS" : "FAIL", r.id, r.name,
                       r.detail);
  }
  return out;
}

}  // namespace edkg::validation
