#pragma once

#include <optional>
#include <string>

namespace icls::cli {

enum class Command { Sweep, Case, Roc, Calibrate, Selftest };

struct Invocation {
  Command command = Command::Sweep;
  std::string config_path;  // empty: built-in defaults
  std::string output_dir = ".";
  std::optional<unsigned long long> seed_override;
  std::optional<std::string> case_override;
  int verbosity = 0;
};

// Runs the subcommand. Exit codes: 0 success, 1 runtime failure
// (unwritable output, simulation error), 2 configuration error.
int dispatch(const Invocation& invocation);

// The executable example suite behind the selftest subcommand. Prints one
// line per check; returns the number of failures.
int run_selftest(bool verbose);

}  // namespace icls::cli
