#pragma once

// Subcommands of the `dsm` command-line tool. Each returns the process
// exit code and writes human-readable output to `out` / `err`.

#include "dsm/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace dsm::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailure = 1,
  kValidationError = 2,
  kRuntimeFailure = 3,
};

/// Default regularization grid for the a |w_a| sweep.
const std::vector<double>& sweep_grid();

/// A non-empty `output_dir` replaces the directory named in the config.
int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err,
            const std::filesystem::path& output_dir = {});
int cmd_verify(const std::filesystem::path& config, std::ostream& out, std::ostream& err,
               const std::filesystem::path& output_dir = {});
int cmd_gallery(std::ostream& out);
int cmd_check_schedule(const std::string& kind, double a0, double param, double horizon,
                       std::ostream& out, std::ostream& err);
int cmd_oracle(const std::filesystem::path& config, std::ostream& out, std::ostream& err,
               const std::filesystem::path& output_dir = {});

/// Parses argv and dispatches to a subcommand.
int main(int argc, char** argv);

}  // namespace dsm::cli
