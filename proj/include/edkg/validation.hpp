#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edkg/fixedpoint.hpp"

namespace edkg::validation {

/// Two levels in C^3 with R = [[1, c], [0, 1]], c != 0, energies 1.5 and 2.5.
std::vector<PhysicalLevel> two_level_fixture();

/// The same level listed twice; R is exactly singular.
std::vector<PhysicalLevel> duplicated_level_fixture();

struct Options {
  Eigen::Index finest_points = 400;  ///< finest grid of the convergence check
  std::uint64_t seed = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

CriterionResult closed_form_consistency(const Options& options);
CriterionResult emergence_rule(const Options& options);
CriterionResult numeric_vs_closed_form(const Options& options);
CriterionResult biorthogonal_machinery(const Options& options);
CriterionResult k_l_contract(const Options& options);
CriterionResult fv_square_law(const Options& options);
CriterionResult pseudo_unitarity(const Options& options);

/// Criteria 1-7.
std::vector<CriterionResult> run_criteria(const Options& options);

/// Criteria 1-7 twice, plus criterion 8 comparing the two reports byte for byte.
std::vector<CriterionResult> run_all(const Options& options);

/// One line per criterion; no timings, so identical inputs give identical text.
std::string format_report(const std::vector<CriterionResult>& results);

}  // namespace edkg::validation
