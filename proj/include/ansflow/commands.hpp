#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ansflow/config.hpp"

namespace ansflow {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitUsage = 2, kExitRuntime = 3 };

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  bool force = false;
  std::filesystem::path input;  ///< plot-data source; defaults to <out>/diagnostics.csv
};

const std::vector<std::string>& command_names();

/// Runs one command, writing artifacts under opts.out_dir, a summary to out
/// and one "error: <kind>: <message>" line to err on failure.
int run_command(std::string_view command, const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
                std::ostream& err);

}  // namespace ansflow
