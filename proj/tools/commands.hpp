#pragma once

#include <ostream>
#include <string>

#include "config.hpp"

namespace edkg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitNoLevels = 3;
inline constexpr int kExitValidation = 4;

struct RunContext {
  std::string out_dir = ".";
  std::ostream* out = nullptr;  ///< human-readable progress, may be null
};

int cmd_spectrum(const RunConfig& cfg, const RunContext& ctx);
int cmd_fixedpoint(const RunConfig& cfg, const RunContext& ctx);
int cmd_metric(const RunConfig& cfg, const RunContext& ctx);
int cmd_evolve(const RunConfig& cfg, const RunContext& ctx);
int cmd_validate(const RunConfig& cfg, const RunContext& ctx);

/// Full command line handling; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string tool_version();

}  // namespace edkg::cli
