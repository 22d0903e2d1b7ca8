#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "infoorder/counterexample.hpp"

namespace infoorder::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,     ///< success / ordering holds / map exists
  kNegative = 1,    ///< verified negative or failed reproduction stage
  kUsage = 2,       ///< bad arguments or input
  kUndecided = 3,
};

enum class OutputFormat { Text, Json };

/// Resolved settings: defaults, then $INFOORDER_OUT_DIR, then --tol-file,
/// then explicit flags.
struct RunConfig {
  Tolerances tol{};
  CriterionOptions criterion{};
  MapSolverOptions solver{};
  double t_max = 10.0;
  int resolution = 1001;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::Text;
  bool timestamp = true;
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "INFOORDER_OUT_DIR";

/// Applies a JSON settings file on top of `config`: {"tolerances": {...},
/// "t_resolution", "max_depth", "max_iterations", "stall_window", "t_max",
/// "resolution", "out_dir"}.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infoorder::cli
