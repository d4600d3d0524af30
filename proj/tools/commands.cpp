#include "commands.hpp"

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "edkg/closed_form.hpp"
#include "edkg/evolution.hpp"
#include "edkg/physical_basis.hpp"
#include "edkg/validation.hpp"
#include "report.hpp"

#ifndef EDKG_VERSION
#define EDKG_VERSION "0.0.0"
#endif

namespace edkg::cli {
namespace {

std::string path_in(const RunContext& ctx, const std::string& name) {
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

Json base_report(const RunConfig& cfg, const std::string& command) {
  Json j;
  j["command"] = command;
  j["config"] = Json::object();
  for (const auto& [section, keys] : cfg.echo) {
    for (const auto& [key, value] : keys) j["config"][section][key] = value;
  }
  j["config_path"] = cfg.path;
  j["seed"] = cfg.seed;
  j["version"] = tool_version();
  return j;
}

void say(const RunContext& ctx, const std::string& line) {
  if (ctx.out) *ctx.out << line << '\n';
}

// Parity acting on the operator's space: block-diagonal for the two-component system.
Matrix parity_for(const Grid& grid, Eigen::Index dimension) {
  const Matrix P = build_parity(grid);
  if (dimension == P.rows()) return P;
  Matrix out = Matrix::Zero(dimension, dimension);
  out.topLeftCorner(P.rows(), P.cols()) = P;
  out.bottomRightCorner(P.rows(), P.cols()) = P;
  return out;
}

Json level_json(const PhysicalLevel& lv) {
  return {{"n", lv.n}, {"j", lv.j}, {"energy", lv.energy}, {"residual", lv.residual}};
}

// Numeric full-line levels against the closed form; branch n of H(z) maps to family index n.
Json closed_form_table(const RunConfig& cfg, const std::vector<PhysicalLevel>& levels) {
  const closed_form::HOParams p{cfg.A, cfg.E0};
  Json rows = Json::array();
  for (const auto& lv : levels) {
    std::vector<std::pair<std::string, double>> candidates = {
        {"plus", closed_form::full_line_plus(p, lv.n)}};
    if (const auto minus = closed_form::full_line_minus(p, lv.n)) {
      candidates.emplace_back("minus_upper", minus->first);
      candidates.emplace_back("minus_lower", minus->second);
    }
    const auto best = std::min_element(candidates.begin(), candidates.end(), [&](auto& a, auto& b) {
      return std::abs(a.second - lv.energy) < std::abs(b.second - lv.energy);
    });
    const double err = std::abs(lv.energy - best->second);
    rows.push_back({{"n", lv.n},
                    {"j", lv.j},
                    {"family", best->first},
                    {"numeric", lv.energy},
                    {"closed_form", best->second},
                    {"abs_error", err},
                    {"rel_error", err / std::abs(best->second)}});
  }
  const closed_form::HOParams scaled{4.0 * cfg.A, 0.5 * cfg.E0};
  return {{"rows", rows},
          {"convention", "full line: half of the closed-form energies at (A, E0)"},
          {"closed_form_parameters", {{"A", scaled.A}, {"E0", scaled.E0}}}};
}

std::vector<PhysicalLevel> physical_levels(const RunConfig& cfg, Json& reports) {
  if (cfg.branches.empty()) throw ConfigError(fmt::format("config '{}': [problem] branches: required", cfg.path));
  if (cfg.windows.empty()) throw ConfigError(fmt::format("config '{}': [problem] windows: required", cfg.path));
  const CollectResult r = collect_physical(cfg.model(), cfg.grid(), cfg.branches, cfg.windows,
                                           cfg.kind, cfg.steps, cfg.trace_options());
  reports = Json::array();
  for (const auto& rep : r.reports) {
    reports.push_back({{"n", rep.n},
                       {"window", {rep.window.first, rep.window.second}},
                       {"roots", rep.roots},
                       {"error", rep.error}});
  }
  return r.levels;
}

}  // namespace

std::string tool_version() { return fmt::format("edkg {}", EDKG_VERSION); }

int cmd_spectrum(const RunConfig& cfg, const RunContext& ctx) {
  const Grid grid = cfg.grid();
  const Matrix H = frozen_family(grid, cfg.model(), cfg.kind)(cfg.z);
  DecomposeOptions opt;
  opt.tol_real = cfg.tol_real;
  const FrozenDecomposition dec = decompose_at(H, cfg.z, opt);
  const SpectrumReport cls = classify_spectrum(dec, cfg.tol_real);

  CsvTable csv({"index", "re", "im", "reality_flag"});
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    csv.add_row({std::to_string(k), format_real(dec.eigenvalues(k).real()),
                 format_real(dec.eigenvalues(k).imag()),
                 dec.reality_flags[static_cast<std::size_t>(k)] ? "1" : "0"});
  }
  Json j = base_report(cfg, "spectrum");
  j["z"] = cfg.z;
  j["dimension"] = dec.size();
  j["biorth_residual"] = dec.biorth_residual;
  j["completeness_residual"] = dec.completeness_residual;
  j["operator_norm"] = dec.operator_norm;
  j["hermitian_input"] = dec.hermitian_input;
  j["real_spectrum"] = dec.real_spectrum();
  Json pairs = Json::array();
  for (const auto& [a, b] : cls.conjugate_pairs) pairs.push_back({a, b});
  j["classification"] = {{"real_count", cls.real.size()},
                         {"conjugate_pairs", pairs},
                         {"unpaired_complex", cls.unpaired_complex},
                         {"conjugation_warning", cls.conjugation_warning}};
  write_file(path_in(ctx, "spectrum.csv"), csv.str());
  write_file(path_in(ctx, "spectrum.json"), dump_json(j));
  say(ctx, fmt::format("spectrum: {} eigenvalues, completeness residual {}", dec.size(),
                       format_real(dec.completeness_residual)));
  return kExitOk;
}

int cmd_fixedpoint(const RunConfig& cfg, const RunContext& ctx) {
  Json reports;
  const std::vector<PhysicalLevel> levels = physical_levels(cfg, reports);

  CsvTable csv({"n", "j", "E_alpha", "residual"});
  Json level_list = Json::array();
  for (const auto& lv : levels) {
    csv.add_row({std::to_string(lv.n), std::to_string(lv.j), format_real(lv.energy),
                 format_real(lv.residual)});
    level_list.push_back(level_json(lv));
  }
  Json j = base_report(cfg, "fixedpoint");
  j["levels"] = level_list;
  j["branch_reports"] = reports;
  if (cfg.model_kind == ModelKind::HOQuadratic && cfg.kind == ProblemKind::Schrodinger &&
      cfg.domain == Domain::Full) {
    j["closed_form_comparison"] = closed_form_table(cfg, levels);
  }
  write_file(path_in(ctx, "fixedpoint.csv"), csv.str());
  write_file(path_in(ctx, "fixedpoint.json"), dump_json(j));
  say(ctx, fmt::format("fixedpoint: {} physical levels", levels.size()));
  return levels.empty() ? kExitNoLevels : kExitOk;
}

int cmd_metric(const RunConfig& cfg, const RunContext& ctx) {
  Json j = base_report(cfg, "metric");
  std::vector<PhysicalLevel> levels;
  switch (cfg.fixture) {
    case Fixture::TwoLevel:
      levels = validation::two_level_fixture();
      break;
    case Fixture::DuplicatedLevel:
      levels = validation::duplicated_level_fixture();
      break;
    case Fixture::None: {
      Json reports;
      levels = physical_levels(cfg, reports);
      j["branch_reports"] = reports;
      break;
    }
  }
  if (levels.empty()) {
    write_file(path_in(ctx, "metric.json"), dump_json(j));
    say(ctx, "metric: no physical levels");
    return kExitNoLevels;
  }

  const PhysicalBasis basis = build_basis(levels);
  const Matrix K = build_K(basis);
  const Matrix L = build_L(basis);
  const MetricSuite m = build_metrics(basis, K, L);
  j["level_count"] = basis.size();
  j["dimension"] = basis.dimension();
  j["condition_R"] = basis.condition_R;
  j["residual_K"] = m.residual_K;
  j["residual_L"] = m.residual_L;
  j["min_eig_mu"] = m.min_eig_mu;
  j["min_eig_nu"] = m.min_eig_nu;
  j["projector_residual"] = projector_residual(basis);
  j["k_minus_l"] = (K - L).norm();
  Json level_list = Json::array();
  for (const auto& lv : levels) level_list.push_back(level_json(lv));
  j["levels"] = level_list;

  std::vector<std::pair<std::string, Matrix>> dumps = {
      {"R", basis.R}, {"K", K}, {"L", L}, {"mu", m.mu}, {"nu", m.nu}};
  if (cfg.metric_z && cfg.fixture == Fixture::None) {
    const Grid grid = cfg.grid();
    const FrozenDecomposition dec = decompose_at(frozen_family(grid, cfg.model(), cfg.kind)(*cfg.metric_z), *cfg.metric_z);
    const Matrix eta = eta_from_decomposition(dec);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (eta + eta.adjoint()), Eigen::EigenvaluesOnly);
    Json e = {{"z", *cfg.metric_z},
              {"hermiticity_residual", hermiticity_residual(eta)},
              {"min_eigenvalue", es.eigenvalues()(0)}};
    dumps.emplace_back("eta_plus", eta);
    if (cfg.domain == Domain::Full && grid.symmetric()) {
      const Matrix C = build_charge(eta, parity_for(grid, eta.rows()));
      e["charge_involution_residual"] = charge_involution_residual(C);
      dumps.emplace_back("charge_C", C);
    }
    j["eta_plus"] = e;
  }
  if (cfg.dump_matrices) {
    for (const auto& [name, mat] : dumps) write_file(path_in(ctx, name + ".txt"), dump_matrix(mat));
  }
  write_file(path_in(ctx, "metric.json"), dump_json(j));
  say(ctx, fmt::format("metric: {} levels, condition(R) {}", basis.size(),
                       format_real(basis.condition_R)));
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, const RunContext& ctx) {
  if (cfg.kind != ProblemKind::KleinGordon) {
    throw ConfigError(fmt::format("config '{}': [problem] kind: evolve needs kleingordon", cfg.path));
  }
  const Grid grid = cfg.grid();
  const FVSystem fv = assemble_fv(build_kleingordon(grid, cfg.model(), cfg.z));
  DecomposeOptions dopt;
  dopt.tol_real = cfg.tol_real;
  const FrozenDecomposition dec = decompose(fv.h_sr, dopt);

  FVState initial;
  if (cfg.initial == InitialState::Gaussian) {
    const Vector g = gaussian(grid, cfg.center, cfg.width, cfg.momentum);
    initial = {g, g, 0.0};
  } else {
    if (cfg.eigen_index >= dec.size()) {
      throw ConfigError(fmt::format("config '{}': [evolve] index: {} exceeds dimension {}",
                                    cfg.path, cfg.eigen_index, dec.size()));
    }
    initial = FVState::from_stacked(dec.right_kets.col(cfg.eigen_index), 0.0);
  }

  Matrix metric;
  std::string metric_name;
  switch (cfg.evolve_metric) {
    case EvolveMetric::Swap:
      metric = fv.eta_sr;
      metric_name = "swap";
      break;
    case EvolveMetric::Identity:
      metric = Matrix::Identity(fv.h_sr.rows(), fv.h_sr.cols());
      metric_name = "identity";
      break;
    case EvolveMetric::Positive:
      metric = eta_from_decomposition(dec);
      metric_name = "positive";
      break;
  }

  const Trajectory traj = evolve(dec, initial, cfg.t_final, cfg.evolve_steps);
  const ConservationReport rep = conservation_report(traj, metric, fv);
  CsvTable csv({"t", "pseudo_norm", "euclidean_norm"});
  double e_min = std::numeric_limits<double>::infinity(), e_max = 0.0;
  for (const auto& s : traj.states) {
    const double euclid = s.stacked().norm();
    e_min = std::min(e_min, euclid);
    e_max = std::max(e_max, euclid);
    csv.add_row({format_real(s.t), format_real(pseudo_norm(s, metric).value), format_real(euclid)});
  }
  Json j = base_report(cfg, "evolve");
  j["metric"] = metric_name;
  j["status"] = rep.pass ? "PASS" : "FAIL";
  j["max_relative_drift"] = rep.max_relative_drift;
  j["initial_norm"] = rep.initial_norm;
  j["degenerate_initial"] = rep.degenerate_initial;
  j["real_spectrum"] = rep.real_spectrum;
  j["complex_spectrum_warning"] = traj.complex_spectrum;
  j["intertwining"] = rep.intertwining;
  j["euclidean_variation"] = e_max > 0.0 ? (e_max - e_min) / e_max : 0.0;
  j["states"] = traj.states.size();
  write_file(path_in(ctx, "evolve.csv"), csv.str());
  write_file(path_in(ctx, "evolve.json"), dump_json(j));
  say(ctx, fmt::format("evolve: {} with metric {}, drift {}", rep.pass ? "PASS" : "FAIL",
                       metric_name, format_real(rep.max_relative_drift)));
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, const RunContext& ctx) {
  validation::Options options;
  options.finest_points = cfg.finest_points;
  options.seed = cfg.seed;
  const auto results = validation::run_all(options);
  const std::string report = validation::format_report(results);
  write_file(path_in(ctx, "validate.txt"), report);
  if (ctx.out) *ctx.out << report;
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  return all ? kExitOk : kExitValidation;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-dependent Hamiltonians: frozen spectra, fixed points, metrics, evolution"};
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "spectrum|fixedpoint|metric|evolve|validate")
      ->required()
      ->check(CLI::IsMember({"spectrum", "fixedpoint", "metric", "evolve", "validate"}));
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out-dir", out_dir, "directory for CSV/JSON outputs");
  app.add_option("--seed", seed, "seed for randomized fixtures (default 0)");
  app.set_version_flag("--version", tool_version());
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else if (command != "validate") {
      throw ConfigError(fmt::format("{} needs --config", command));
    }
    if (seed) cfg.seed = *seed;
    std::filesystem::create_directories(out_dir);
    const RunContext ctx{out_dir, &out};
    if (command == "spectrum") return cmd_spectrum(cfg, ctx);
    if (command == "fixedpoint") return cmd_fixedpoint(cfg, ctx);
    if (command == "metric") return cmd_metric(cfg, ctx);
    if (command == "evolve") return cmd_evolve(cfg, ctx);
    return cmd_validate(cfg, ctx);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace edkg::cli
