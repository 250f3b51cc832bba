#pragma once

#include <string>
#include <vector>

#include "apec/config.hpp"
#include "apec/error.hpp"

namespace apec {

struct CommandResult {
  std::vector<std::string> files;  // names written inside config.out_dir
  std::vector<std::string> warnings;
  std::string summary;  // JSON
};

/// Model-set CSV, window and CPS JSON, manifest.
CommandResult cmd_generate(const RunConfig& config);

/// Results and frequency CSVs, summary JSON with the theorem-bound check, manifest.
/// A configured comparison Følner sequence adds a second run and a comparison report.
CommandResult cmd_ac(const RunConfig& config);

/// Box-counting and Minkowski fits of the window boundary, manifest.
CommandResult cmd_dim(const RunConfig& config);

// Process exit code for an error: 2 validation, 3 resolution/radius guard, 4 resource cap.
int exit_code(ErrorCode code);
// {"error": {"code": ..., "message": ...}}
std::string error_json(const Error& e);

}  // namespace apec
