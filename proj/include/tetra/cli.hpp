#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tetra/forcefield.hpp"

namespace tetra::cli {

struct AnalysisConfig {
  int l_max = 4;
  int N = 16;
  int steps = 10;
  double start_amplitude = 1e-3;
  double amplitude_step = 5e-3;
  double newton_tolerance = 1e-11;
  double residual_tolerance = 1e-9;
  double equilibrium_tolerance = 1e-12;
  double collision_floor = 1e-6;
};

struct OutputConfig {
  std::string format = "json";  // json | csv
  std::string path;             // directory; empty writes to stdout
};

struct RunConfig {
  forcefield::PairPotentialParams potential;
  AnalysisConfig analysis;
  OutputConfig output;
};

/// Sections [potential], [analysis], [output] with `key = value` lines; values are numbers, true/false or
/// double-quoted strings, `#` starts a comment. Throws ConfigError on unknown sections or keys, malformed lines,
/// duplicate keys and values out of range.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Environment variable overriding output.path.
inline constexpr const char* kOutputDirEnv = "TETRA_OUTPUT_DIR";

/// Runs one subcommand. Exit codes: 0 success, 1 configuration or usage error, 2 numerical non-convergence or
/// collision, 3 internal consistency failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tetra::cli
