#pragma once

#include <string>
#include <vector>

#include "fblab/config.hpp"

namespace fblab::app {

/// Exit statuses of the command line tool.
enum ExitCode { kOk = 0, kError = 1, kCheckFailed = 2 };

const std::vector<std::string>& subcommands();

/// Runs one subcommand with outputs under <cfg.run.out>/<name>/: the
/// module's CSV files and manifest.json. `all` runs every module into its
/// own directory and the acceptance suite into <out>/all/. On a library
/// error a JSON error record goes to stderr and to error.json.
int run_subcommand(const std::string& name, const RunConfig& cfg, bool quiet, const std::string& config_source);

}  // namespace fblab::app
