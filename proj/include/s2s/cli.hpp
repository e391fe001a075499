#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "s2s/scene_io.hpp"

namespace s2s {

/// Merged command line / scene-file configuration. Flags win over file
/// values; everything defaults so the stock scenes run with zero flags.
struct RunConfig {
  std::string command;
  std::string scene_path;
  std::string out_dir = ".";

  int depth = 30;   // continued-fraction depth (classify-angle)
  int order = -1;   // Taylor order in eta; -1 derives it from the cutoffs
  std::vector<double> eps = {0.1, 0.15, 0.2};
  std::vector<double> cutoffs = {0.0, 2.0, 4.0};
  double ppu = 12.0;         // panels per unit length on the hole pattern
  double delta_omega = 0.15;
  double gamma_max = 0.0;    // 0 derives max cutoff + 3
  int probes = 12;
  int refit = 16;            // chords per segment in the power-map transform

  double omega = std::numeric_limits<double>::quiet_NaN();  // classify-angle
  std::string cert;  // classify-angle certificate file (overrides omega)
};

/// args = argv without the program name: {command, flags...}.
/// Loads the scene file named by --scene (when given) and merges its
/// "params" object under the flags. ConfigError on anything malformed.
RunConfig parse_config(const std::vector<std::string>& args);

/// Dispatches cfg, writing artifacts under cfg.out_dir and one summary line
/// per stage to `log`. Returns the process exit code (0 ok, 1 numerical).
int run(const RunConfig& cfg, std::ostream& log);

/// parse_config + run with errors mapped to exit codes: 2 for ConfigError,
/// 1 for anything else thrown.
int cli_main(int argc, char** argv);

}  // namespace s2s
