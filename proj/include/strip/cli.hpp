#pragma once

#include <string>

#include "strip/config.hpp"

namespace strip {

/// Exit codes shared by every command.
enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kToleranceFailure = 2,
  kInconclusive = 3,
};

/// Runs one batch command against the config; the JSON report is written to
/// report_out and scaling tables (when the command produces any) to csv_out.
int run_command(const std::string& command, const RunConfig& cfg,
                std::string& report_out, std::string& csv_out);

}  // namespace strip
