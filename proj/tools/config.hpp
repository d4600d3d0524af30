#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edkg/fixedpoint.hpp"

namespace edkg::cli {

/// Raised for unreadable or invalid configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { Constant, HOQuadratic, MassSquared };
enum class Domain { Full, Half };
enum class Fixture { None, TwoLevel, DuplicatedLevel };
enum class InitialState { Gaussian, Eigenstate };
enum class EvolveMetric { Swap, Identity, Positive };

/// c z^zpow x^xpow, one term of a polynomial m^2(z, x).
struct MassTerm {
  Complex coefficient;
  int zpow = 0;
  int xpow = 0;
};

struct RunConfig {
  std::string path;
  /// Section -> key -> raw value, as read; echoed into every JSON report.
  std::map<std::string, std::map<std::string, std::string>> echo;

  ModelKind model_kind = ModelKind::Constant;
  double m = 1.0;
  double A = 1.0;
  double E0 = 0.0;
  std::vector<MassTerm> terms;

  double x_min = -10.0;
  double x_max = 10.0;
  Eigen::Index n_points = 101;
  Domain domain = Domain::Full;

  ProblemKind kind = ProblemKind::Schrodinger;
  double z = 0.0;
  std::vector<int> branches;
  std::vector<std::pair<double, double>> windows;
  int steps = 64;

  double refine_tol = 1e-10;
  double tol_real = 1e-8;
  double overlap_floor = 0.7;

  Fixture fixture = Fixture::None;
  std::optional<double> metric_z;
  bool dump_matrices = false;

  double t_final = 10.0;
  int evolve_steps = 200;
  InitialState initial = InitialState::Gaussian;
  double center = 0.0;
  double width = 1.0;
  double momentum = 0.0;
  Eigen::Index eigen_index = 0;
  EvolveMetric evolve_metric = EvolveMetric::Swap;

  Eigen::Index finest_points = 400;
  std::uint64_t seed = 0;

  MassModel model() const;
  Grid grid() const;
  TraceOptions trace_options() const;
};

RunConfig load_config(const std::string& path);

}  // namespace edkg::cli
