// Subcommands of the ferrotorque command-line tool.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ferrotorque/cli/config.hpp"
#include "ferrotorque/cli/run_config.hpp"

namespace ferrotorque::cli {

inline constexpr const char* kToolName = "ferrotorque";
inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPhysics = 3;

struct CommandResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json metadata;
};

CommandResult cmd_derive(const Document& doc, const OutputSpec& output, std::ostream& report);
CommandResult cmd_spectrum(const Document& doc, const OutputSpec& output);
CommandResult cmd_radius_sweep(const Document& doc, const OutputSpec& output);
CommandResult cmd_simulate(const Document& doc, const OutputSpec& output);
CommandResult cmd_exclusion(const Document& doc, const OutputSpec& output, std::ostream& warnings);

/// Parses arguments, dispatches, and maps errors to exit codes: 0 success,
/// 2 configuration or validation failure, 3 numerical or physical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ferrotorque::cli
