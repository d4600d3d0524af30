#include "config.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace edkg::cli {
namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"model", {"kind", "m", "A", "E0", "terms"}},
    {"grid", {"x_min", "x_max", "n_points", "domain"}},
    {"problem", {"kind", "z", "branches", "windows", "steps"}},
    {"tolerances", {"refine_tol", "tol_real", "overlap_floor"}},
    {"metric", {"fixture", "z", "dump"}},
    {"evolve", {"t_final", "steps", "initial", "center", "width", "momentum", "index", "metric"}},
    {"validate", {"finest_points"}},
    {"run", {"seed"}},
};

class Reader {
 public:
  Reader(const RunConfig& cfg) : cfg_(cfg) {}

  const std::string* raw(const std::string& section, const std::string& key) const {
    const auto s = cfg_.echo.find(section);
    if (s == cfg_.echo.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& what) const {
    throw ConfigError(fmt::format("config '{}': [{}] {}: {}", cfg_.path, section, key, what));
  }

  double real(const std::string& section, const std::string& key, double fallback) const {
    const std::string* v = raw(section, key);
    return v ? parse_real(section, key, *v) : fallback;
  }

  long long integer(const std::string& section, const std::string& key, long long fallback) const {
    const std::string* v = raw(section, key);
    return v ? parse_integer(section, key, *v) : fallback;
  }

  double parse_real(const std::string& section, const std::string& key, std::string text) const {
    boost::trim(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      fail(section, key, fmt::format("'{}' is not a number", text));
    }
    if (used != text.size() || !std::isfinite(value)) {
      fail(section, key, fmt::format("'{}' is not a finite number", text));
    }
    return value;
  }

  long long parse_integer(const std::string& section, const std::string& key,
                          std::string text) const {
    boost::trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      fail(section, key, fmt::format("'{}' is not an integer", text));
    }
    return value;
  }

  template <typename Enum>
  Enum choice(const std::string& section, const std::string& key,
              const std::map<std::string, Enum>& options, Enum fallback) const {
    const std::string* v = raw(section, key);
    if (!v) return fallback;
    const auto it = options.find(boost::trim_copy(*v));
    if (it == options.end()) {
      std::vector<std::string> names;
      for (const auto& [name, _] : options) names.push_back(name);
      fail(section, key, fmt::format("'{}' is not one of {}", *v, boost::join(names, "|")));
    }
    return it->second;
  }

  std::vector<std::string> list(const std::string& section, const std::string& key,
                                const char* separators) const {
    std::vector<std::string> parts;
    const std::string* v = raw(section, key);
    if (!v) return parts;
    boost::split(parts, *v, boost::is_any_of(separators));
    for (auto& p : parts) boost::trim(p);
    parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
    return parts;
  }

 private:
  const RunConfig& cfg_;
};

}  // namespace

MassModel RunConfig::model() const {
  switch (model_kind) {
    case ModelKind::Constant:
      return ConstantMass{m};
    case ModelKind::HOQuadratic:
      return HOQuadratic{A, E0};
    case ModelKind::MassSquared:
      break;
  }
  return GeneralMassSquared{[terms = terms](double z, double x) {
    Complex sum = 0.0;
    for (const auto& t : terms) sum += t.coefficient * std::pow(z, t.zpow) * std::pow(x, t.xpow);
    return sum;
  }};
}

Grid RunConfig::grid() const {
  return domain == Domain::Full ? Grid(x_min, x_max, n_points) : Grid::half_line(x_max, n_points);
}

TraceOptions RunConfig::trace_options() const {
  TraceOptions opt;
  opt.refine_tol = refine_tol;
  opt.tol_real = tol_real;
  opt.overlap_floor = overlap_floor;
  opt.decompose.tol_real = tol_real;
  return opt;
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  cfg.path = path;
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    if (e.line() == 0) throw ConfigError(fmt::format("cannot read config '{}'", path));
    throw ConfigError(fmt::format("config '{}': line {}: {}", path, e.line(), e.message()));
  }

  for (const auto& [section, body] : tree) {
    const auto known = kSchema.find(section);
    if (body.empty() || known == kSchema.end()) {
      throw ConfigError(fmt::format("config '{}': unknown section or top-level key '{}'", path, section));
    }
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) {
        throw ConfigError(fmt::format("config '{}': unknown key [{}] {}", path, section, key));
      }
      cfg.echo[section][key] = value.data();
    }
  }

  const Reader r(cfg);
  cfg.model_kind = r.choice<ModelKind>("model", "kind",
                                       {{"constant", ModelKind::Constant},
                                        {"ho_quadratic", ModelKind::HOQuadratic},
                                        {"mass_squared", ModelKind::MassSquared}},
                                       ModelKind::Constant);
  cfg.m = r.real("model", "m", cfg.m);
  cfg.A = r.real("model", "A", cfg.A);
  cfg.E0 = r.real("model", "E0", cfg.E0);
  for (const auto& term : r.list("model", "terms", ";")) {
    std::vector<std::string> fields;
    boost::split(fields, term, boost::is_any_of(","));
    if (fields.size() != 4) r.fail("model", "terms", fmt::format("'{}' needs re,im,zpow,xpow", term));
    MassTerm t;
    t.coefficient = {r.parse_real("model", "terms", fields[0]), r.parse_real("model", "terms", fields[1])};
    t.zpow = static_cast<int>(r.parse_integer("model", "terms", fields[2]));
    t.xpow = static_cast<int>(r.parse_integer("model", "terms", fields[3]));
    if (t.zpow < 0 || t.xpow < 0) r.fail("model", "terms", "powers must be non-negative");
    cfg.terms.push_back(t);
  }
  if (cfg.model_kind == ModelKind::MassSquared && cfg.terms.empty()) {
    r.fail("model", "terms", "mass_squared needs at least one term");
  }
  if (cfg.model_kind == ModelKind::Constant && !(cfg.m > 0.0)) r.fail("model", "m", "must be positive");
  if (cfg.model_kind == ModelKind::HOQuadratic && !(cfg.A > 0.0)) r.fail("model", "A", "must be positive");

  cfg.x_min = r.real("grid", "x_min", cfg.x_min);
  cfg.x_max = r.real("grid", "x_max", cfg.x_max);
  cfg.n_points = r.integer("grid", "n_points", cfg.n_points);
  cfg.domain = r.choice<Domain>("grid", "domain", {{"full", Domain::Full}, {"half", Domain::Half}},
                                Domain::Full);
  if (cfg.n_points < 3) r.fail("grid", "n_points", "must be at least 3");
  if (cfg.domain == Domain::Full && !(cfg.x_min < cfg.x_max)) r.fail("grid", "x_max", "must exceed x_min");
  if (cfg.domain == Domain::Half && !(cfg.x_max > 0.0)) r.fail("grid", "x_max", "must be positive");

  cfg.kind = r.choice<ProblemKind>("problem", "kind",
                                   {{"schrodinger", ProblemKind::Schrodinger},
                                    {"kleingordon", ProblemKind::KleinGordon}},
                                   ProblemKind::Schrodinger);
  if (cfg.kind == ProblemKind::Schrodinger && cfg.model_kind == ModelKind::MassSquared) {
    r.fail("problem", "kind", "schrodinger needs model kind constant or ho_quadratic");
  }
  cfg.z = r.real("problem", "z", cfg.z);
  for (const auto& b : r.list("problem", "branches", ",")) {
    const long long n = r.parse_integer("problem", "branches", b);
    if (n < 0) r.fail("problem", "branches", "branch indices must be non-negative");
    cfg.branches.push_back(static_cast<int>(n));
  }
  for (const auto& w : r.list("problem", "windows", ",")) {
    const auto colon = w.find(':');
    if (colon == std::string::npos) r.fail("problem", "windows", fmt::format("'{}' is not lo:hi", w));
    const double lo = r.parse_real("problem", "windows", w.substr(0, colon));
    const double hi = r.parse_real("problem", "windows", w.substr(colon + 1));
    if (!(lo < hi)) r.fail("problem", "windows", fmt::format("'{}' is empty", w));
    cfg.windows.emplace_back(lo, hi);
  }
  cfg.steps = static_cast<int>(r.integer("problem", "steps", cfg.steps));
  if (cfg.steps < 2) r.fail("problem", "steps", "must be at least 2");

  cfg.refine_tol = r.real("tolerances", "refine_tol", cfg.refine_tol);
  cfg.tol_real = r.real("tolerances", "tol_real", cfg.tol_real);
  cfg.overlap_floor = r.real("tolerances", "overlap_floor", cfg.overlap_floor);
  if (!(cfg.refine_tol > 0.0)) r.fail("tolerances", "refine_tol", "must be positive");
  if (!(cfg.tol_real > 0.0)) r.fail("tolerances", "tol_real", "must be positive");
  if (!(cfg.overlap_floor > 0.0 && cfg.overlap_floor <= 1.0)) {
    r.fail("tolerances", "overlap_floor", "must lie in (0, 1]");
  }

  cfg.fixture = r.choice<Fixture>("metric", "fixture",
                                  {{"none", Fixture::None},
                                   {"two_level", Fixture::TwoLevel},
                                   {"duplicated_level", Fixture::DuplicatedLevel}},
                                  Fixture::None);
  if (r.raw("metric", "z")) cfg.metric_z = r.real("metric", "z", 0.0);
  cfg.dump_matrices = r.choice<bool>("metric", "dump", {{"true", true}, {"false", false}}, false);

  cfg.t_final = r.real("evolve", "t_final", cfg.t_final);
  cfg.evolve_steps = static_cast<int>(r.integer("evolve", "steps", cfg.evolve_steps));
  if (cfg.evolve_steps < 0) r.fail("evolve", "steps", "must be non-negative");
  cfg.initial = r.choice<InitialState>("evolve", "initial",
                                       {{"gaussian", InitialState::Gaussian},
                                        {"eigenstate", InitialState::Eigenstate}},
                                       InitialState::Gaussian);
  cfg.center = r.real("evolve", "center", cfg.center);
  cfg.width = r.real("evolve", "width", cfg.width);
  if (!(cfg.width > 0.0)) r.fail("evolve", "width", "must be positive");
  cfg.momentum = r.real("evolve", "momentum", cfg.momentum);
  cfg.eigen_index = r.integer("evolve", "index", cfg.eigen_index);
  if (cfg.eigen_index < 0) r.fail("evolve", "index", "must be non-negative");
  cfg.evolve_metric = r.choice<EvolveMetric>("evolve", "metric",
                                             {{"swap", EvolveMetric::Swap},
                                              {"identity", EvolveMetric::Identity},
                                              {"positive", EvolveMetric::Positive}},
                                             EvolveMetric::Swap);

  cfg.finest_points = r.integer("validate", "finest_points", cfg.finest_points);
  if (cfg.finest_points < 1) r.fail("validate", "finest_points", "must be positive");
  const long long seed = r.integer("run", "seed", 0);
  if (seed < 0) r.fail("run", "seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  return cfg;
}

}  // namespace edkg::cli
