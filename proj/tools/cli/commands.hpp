#pragma once

#include <filesystem>
#include <iosfwd>

#include "spec.hpp"

namespace unisgd::cli {

enum ExitCode : int { ok = 0, spec_error = 1, numerical_failure = 2, check_failed = 3 };

int cmd_run(const ExperimentSpec& spec, std::ostream& out);
int cmd_rates(const ExperimentSpec& spec, std::ostream& out);
int cmd_check(const ExperimentSpec& spec, std::ostream& out);
int cmd_solve(const ExperimentSpec& spec, std::ostream& out);

// Loads the spec and runs the named subcommand, mapping exceptions to exit codes.
int dispatch(const std::string& command, const std::filesystem::path& spec_file, std::ostream& out,
             std::ostream& err);

}  // namespace unisgd::cli
